"""Command-line front end.

Subcommands
-----------
characteristics  pmf characteristics (theta, delta, moments, span multiple)
split            Bernoulli part extraction of a pmf
llt-bound        two-sided envelopes for P{S_n = kappa}, single point or sweep
gamkrelidze      smoothness statistics and interval discrepancy of an iid sum
scenery          random-scenery moment checks / envelope
partition        distinct-part partition counts via the tilted model
validate         identity checks for a pmf (reconstruction, delta, variance)

Output is JSON (default) or CSV, deterministic for a fixed (config, seed).
Exit codes: 0 success, 1 a stated hypothesis failed for the input,
2 malformed input.  Floating-point numbers are emitted with 17 significant
digits so that values round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import bounds, gamkrelidze, partition, scenery
from .convolve import iid_sum
from .errors import LatticeError, NumericsError, PreconditionError
from .extraction import reconstruct, split, xi_law
from .lattice import characteristics, delta_smoothness, moments, pmf_from_json, theta

ENV_CONSTANTS = "LLT_CONSTANTS"


@dataclass
class RunConfig:
    """Parsed invocation; see the subcommand help strings for field meaning."""

    command: str
    input_path: str | None = None
    output_format: str = "json"
    mode: str = "exact-plug-ins"
    envelope: str = "sandwich"
    h: float | None = None
    n: int | None = None
    kappa: float | None = None
    kappa_from: float | None = None
    kappa_to: float | None = None
    a_n: float | None = None
    b_n: float | None = None
    m: int | None = None
    vartheta: float | None = None
    seed: int | None = None
    mc_samples: int | None = None
    partition_mode: str = "both"
    law_out: str | None = None
    constants_overrides: dict = field(default_factory=dict)


def _load_constants(config: RunConfig) -> bounds.ConstantsRegistry:
    over = dict(config.constants_overrides)
    return bounds.ConstantsRegistry(
        c0=float(over.get("c0", bounds.DEFAULT_C0)),
        ce=float(over.get("ce", bounds.DEFAULT_CE)),
        provenance=over.get("provenance", bounds.ConstantsRegistry().provenance),
    )


def _read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fobj:
            return json.load(fobj)
    except OSError as exc:
        raise LatticeError(f"cannot read input file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LatticeError(f"malformed JSON in {path}: {exc}") from exc


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    if isinstance(x, (list, tuple, dict)):
        # comma-free encoding keeps the CSV cell grammar intact
        return json.dumps(x, sort_keys=True, separators=(";", ":"))
    return str(x)


def _flatten(prefix: str, obj: Any, out: dict) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], out)
    else:
        out[prefix] = obj


def render(payload: Any, output_format: str) -> str:
    """Serialize a payload deterministically."""
    if output_format == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output_format != "csv":
        raise LatticeError(f"unknown output format {output_format!r}")
    rows = payload if isinstance(payload, list) else [payload]
    flat_rows = []
    for row in rows:
        flat: dict = {}
        _flatten("", row, flat)
        flat_rows.append(flat)
    headers: list[str] = []
    for flat in flat_rows:
        for key in flat:
            if key not in headers:
                headers.append(key)
    lines = [",".join(headers)]
    for flat in flat_rows:
        lines.append(",".join(_fmt(flat.get(h)) for h in headers))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_characteristics(config: RunConfig) -> dict:
    pmf = pmf_from_json(_read_json(config.input_path))
    return characteristics(pmf).to_json_dict()


def _cmd_split(config: RunConfig) -> dict:
    pmf = pmf_from_json(_read_json(config.input_path))
    sp = split(pmf, config.vartheta)
    out = sp.to_json_dict()
    out["xi_law"] = xi_law(sp).to_json_dict()
    return out


def _pick_h(config: RunConfig, theta_n: float) -> float:
    if config.h is not None:
        return config.h
    try:
        return bounds.h_default(theta_n)
    except PreconditionError:
        return 0.25


def _bound_row(report: bounds.BoundReport) -> dict:
    row = {
        "kappa": report.kappa,
        "exact": report.exact,
        "gaussian": report.gaussian,
        "lower": report.lower,
        "upper": report.upper,
        "envelope_width": report.upper - report.lower,
    }
    if report.exact is not None:
        row["sandwich_ok"] = bool(report.lower <= report.exact <= report.upper)
    return row


def _cmd_llt_bound(config: RunConfig) -> Any:
    pmf = pmf_from_json(_read_json(config.input_path))
    if config.n is None or config.n < 1:
        raise LatticeError("llt-bound requires --n >= 1")
    constants = _load_constants(config)
    summands = [pmf] * config.n
    thetas = [theta(pmf)] * config.n
    theta_n = sum(thetas)
    h = _pick_h(config, theta_n)
    exact_mode = config.mode == "exact-plug-ins"
    law = iid_sum(pmf, config.n) if exact_mode else None
    if config.law_out:
        if law is None:
            law = iid_sum(pmf, config.n)
        with open(config.law_out, "w", encoding="utf-8") as fobj:
            fobj.write(render(law.pmf.to_json_dict(), "json"))
    if exact_mode:
        plug = bounds.exact_plug_ins(summands, thetas, h)
    else:
        plug = bounds.bounded_plug_ins(summands, thetas, h, constants=constants)

    def one(kappa: float) -> bounds.BoundReport:
        exact = law.pmf.mass(round((kappa - law.pmf.v0) / law.pmf.D)) if exact_mode else None
        if config.envelope == "sandwich":
            return bounds.sandwich_envelope(summands, thetas, h, kappa, plug, constants, exact)
        if config.envelope == "central":
            return bounds.central_envelope(summands, thetas, kappa, plug, constants, exact)
        if config.envelope == "psi":
            return bounds.psi_envelope(
                summands, thetas, kappa, lambda x: abs(x) ** 3, constants, exact
            )
        raise LatticeError(f"unknown envelope {config.envelope!r}")

    v0n = pmf.v0 * config.n
    if config.kappa is not None:
        report = one(config.kappa)
        out = report.to_json_dict(constants)
        out["envelope_width"] = report.upper - report.lower
        if report.exact is not None:
            out["sandwich_ok"] = bool(report.lower <= report.exact <= report.upper)
        return out
    if config.kappa_from is None or config.kappa_to is None:
        raise LatticeError("llt-bound requires --kappa or both --kappa-from/--kappa-to")
    k_lo = math.ceil((config.kappa_from - v0n) / pmf.D - 1e-9)
    k_hi = math.floor((config.kappa_to - v0n) / pmf.D + 1e-9)
    return [_bound_row(one(v0n + pmf.D * k)) for k in range(k_lo, k_hi + 1)]


def _cmd_gamkrelidze(config: RunConfig) -> dict:
    pmf = pmf_from_json(_read_json(config.input_path))
    if config.n is None or config.n < 1:
        raise LatticeError("gamkrelidze requires --n >= 1")
    constants = _load_constants(config)
    law = iid_sum(pmf, config.n)
    a_n = config.a_n if config.a_n is not None else law.mean
    b_n = config.b_n if config.b_n is not None else law.variance
    report = gamkrelidze.interval_discrepancy(law, a_n, b_n)
    check = gamkrelidze.effective_pointwise_bound(report)
    thetas = [theta(pmf)] * config.n
    h = _pick_h(config, sum(thetas))
    extr = gamkrelidze.smoothness_via_extraction([pmf] * config.n, thetas, h, b_n, constants)
    out = report.to_json_dict()
    out["pointwise_check"] = check.to_json_dict()
    out["extraction_bound"] = extr.to_json_dict()
    out["extraction_bound"]["h"] = h
    return out


def _cmd_scenery(config: RunConfig) -> dict:
    model = scenery.scenery_from_json(_read_json(config.input_path))
    constants = _load_constants(config)
    if config.kappa is None:
        mom = scenery.second_moment_check(model)
        return mom.to_json_dict()
    h = config.h if config.h is not None else 0.25
    report = scenery.scenery_envelope(model, h, config.kappa, constants=constants)
    out = report.to_json_dict(constants)
    if config.mc_samples:
        est = scenery.monte_carlo_point_prob(
            model, config.kappa, samples=config.mc_samples, seed=config.seed or 1
        )
        lo, hi = est.interval()
        out["monte_carlo"] = {
            "p_hat": est.p_hat,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
            "ci3_low": lo,
            "ci3_high": hi,
        }
    return out


def _cmd_partition(config: RunConfig) -> dict:
    if config.m is None or config.n is None:
        raise LatticeError("partition requires --m and --n")
    inst = partition.count_partitions(config.m, config.n, config.partition_mode)
    return inst.to_json_dict()


def _cmd_validate(config: RunConfig) -> dict:
    pmf = pmf_from_json(_read_json(config.input_path))
    checks = []
    th = theta(pmf)
    de = delta_smoothness(pmf)
    checks.append(
        {"name": "delta_equals_2_minus_2_theta", "residual": abs(de - (2.0 - 2.0 * th))}
    )
    mean, var = moments(pmf)
    checks.append(
        {"name": "variance_at_least_quarter_span_sq_theta", "residual": max(0.0, pmf.D**2 * th / 4.0 - var)}
    )
    if th > 0:
        sp = split(pmf)
        rec = reconstruct(sp)
        err = max(
            abs(rec.mass(k) - pmf.mass(k)) for k in set(pmf.probs) | set(rec.probs)
        )
        checks.append({"name": "reconstruction_pointwise", "residual": err})
        xi = xi_law(sp)
        _, xv = moments(xi)
        checks.append(
            {
                "name": "xi_variance_identity",
                "residual": abs(xv - (var - pmf.D**2 * sp.vartheta / 4.0)),
            }
        )
    tolerances = {
        "delta_equals_2_minus_2_theta": 1e-12,
        "variance_at_least_quarter_span_sq_theta": 1e-12,
        "reconstruction_pointwise": 1e-14,
        "xi_variance_identity": 1e-12,
    }
    for c in checks:
        c["pass"] = bool(c["residual"] <= tolerances[c["name"]])
    return {"checks": checks, "all_pass": all(c["pass"] for c in checks)}


_COMMANDS = {
    "characteristics": _cmd_characteristics,
    "split": _cmd_split,
    "llt-bound": _cmd_llt_bound,
    "gamkrelidze": _cmd_gamkrelidze,
    "scenery": _cmd_scenery,
    "partition": _cmd_partition,
    "validate": _cmd_validate,
}


def run(config: RunConfig) -> tuple[int, Any]:
    """Dispatch a config; returns (exit_code, payload-or-error-object)."""
    try:
        payload = _COMMANDS[config.command](config)
        return 0, payload
    except PreconditionError as exc:
        return 1, {"error": {"kind": "hypothesis-rejected", "message": str(exc)}}
    except NumericsError as exc:
        return 2, {"error": {"kind": "numerical-failure", "message": str(exc)}}
    except (LatticeError, KeyError) as exc:
        return 2, {"error": {"kind": "input-error", "message": str(exc)}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lltkit",
        description="Effective local limit theorem bounds for lattice sums.",
    )
    parser.add_argument("--constants", help="JSON file overriding c0/ce (or set LLT_CONSTANTS)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, **kwargs) -> argparse.ArgumentParser:
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = add("characteristics", help="pmf characteristics")
    p.add_argument("input", help="pmf JSON file")

    p = add("split", help="Bernoulli part extraction")
    p.add_argument("input")
    p.add_argument("--vartheta", type=float)

    p = add("llt-bound", help="two-sided envelope for P{S_n = kappa}")
    p.add_argument("input")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa", type=float)
    p.add_argument("--kappa-from", type=float)
    p.add_argument("--kappa-to", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--mode", choices=("exact-plug-ins", "bounded-plug-ins"),
                   default="exact-plug-ins")
    p.add_argument("--envelope", choices=("sandwich", "central", "psi"), default="sandwich")
    p.add_argument("--law-out", dest="law_out",
                   help="also write the exact sum law to this file (pmf JSON schema)")

    p = add("gamkrelidze", help="smoothness statistics of an iid sum")
    p.add_argument("input")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, dest="a_n")
    p.add_argument("--b", type=float, dest="b_n")
    p.add_argument("--h", type=float)

    p = add("scenery", help="random-scenery checks / envelope")
    p.add_argument("input", help="scenery model JSON file")
    p.add_argument("--kappa", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--mc", type=int, dest="mc_samples")
    p.add_argument("--seed", type=int)

    p = add("partition", help="distinct-part partition count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("model", "enum", "both"), default="both",
                   dest="partition_mode")

    p = add("validate", help="identity checks for a pmf")
    p.add_argument("input")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {}
    path = args.constants or os.environ.get(ENV_CONSTANTS)
    if path:
        overrides = _read_json(path)
        if not isinstance(overrides, dict):
            raise LatticeError("constants override file must hold a JSON object")
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input", None),
        output_format=args.format,
        mode=getattr(args, "mode", "exact-plug-ins"),
        envelope=getattr(args, "envelope", "sandwich"),
        h=getattr(args, "h", None),
        n=getattr(args, "n", None),
        kappa=getattr(args, "kappa", None),
        kappa_from=getattr(args, "kappa_from", None),
        kappa_to=getattr(args, "kappa_to", None),
        a_n=getattr(args, "a_n", None),
        b_n=getattr(args, "b_n", None),
        m=getattr(args, "m", None),
        vartheta=getattr(args, "vartheta", None),
        seed=getattr(args, "seed", None),
        mc_samples=getattr(args, "mc_samples", None),
        partition_mode=getattr(args, "partition_mode", "both"),
        law_out=getattr(args, "law_out", None),
        constants_overrides=overrides,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (LatticeError, NumericsError) as exc:
        sys.stdout.write(render({"error": {"kind": "input-error", "message": str(exc)}}, "json"))
        return 2
    code, payload = run(config)
    sys.stdout.write(render(payload, config.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
