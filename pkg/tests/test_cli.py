"""Command-line interface: dispatch, formats, determinism, exit codes."""

from __future__ import annotations

import json
import math

import pytest

from lltkit.cli import main


@pytest.fixture
def bern_file(tmp_path):
    path = tmp_path / "dist.json"
    path.write_text(json.dumps({"v0": 0, "D": 1, "probs": [[0, 1], [1, 1]]}))
    return str(path)


@pytest.fixture
def scenery_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(
        json.dumps(
            {
                "x_law": {"v0": 0, "D": 1, "probs": [[0, 1], [1, 1]]},
                "increments": {"v0": 0, "D": 1, "probs": [[1, 1], [2, 1]]},
                "n": 4,
                "vartheta": 0.5,
            }
        )
    )
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


class TestCharacteristics:
    def test_fair_bernoulli(self, capsys, bern_file):
        code, out = run_cli(capsys, ["characteristics", bern_file])
        assert code == 0
        payload = json.loads(out)
        assert payload["theta"] == 0.5
        assert payload["delta"] == 1.0
        assert payload["variance"] == 0.25
        assert payload["span_multiple"] == 1

    def test_csv_and_json_hold_same_values(self, capsys, bern_file):
        _, out_json = run_cli(capsys, ["characteristics", bern_file])
        _, out_csv = run_cli(capsys, ["characteristics", bern_file, "--format", "csv"])
        payload = json.loads(out_json)
        header, row = out_csv.strip().split("\n")
        csv_vals = dict(zip(header.split(","), row.split(",")))
        for key, val in payload.items():
            assert float(csv_vals[key]) == float(val)


class TestLltBound:
    def test_single_point_exact_mode(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "64", "--kappa", "32", "--h", "0.25"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["sandwich_ok"] is True
        assert payload["lower"] <= payload["exact"] <= payload["upper"]
        assert payload["exact"] == pytest.approx(math.comb(64, 32) / 2**64, rel=1e-12)
        assert payload["params"]["mode"] == "exact-plug-ins"
        assert payload["constants"]["c1"] == 4.0

    def test_bounded_mode_has_no_exact(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "64", "--kappa", "32", "--h", "0.25",
             "--mode", "bounded-plug-ins"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["exact"] is None
        assert payload["params"]["mode"] == "bounded-plug-ins"

    def test_sweep_all_rows_pass(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "64", "--kappa-from", "20",
             "--kappa-to", "44", "--h", "0.25"],
        )
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 25
        assert all(r["sandwich_ok"] for r in rows)

    def test_empty_sweep_is_fine(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "8", "--kappa-from", "3.2",
             "--kappa-to", "3.8", "--h", "0.25"],
        )
        assert code == 0
        assert json.loads(out) == []

    def test_far_tail_gaussian_underflows_to_zero(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "8", "--kappa", "8", "--h", "0.25"],
        )
        assert code == 0  # far outside the bulk but still a valid lattice point

    def test_central_envelope_hypothesis_failure_exits_1(self, capsys, bern_file):
        code, out = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "4", "--kappa", "2",
             "--envelope", "central"],
        )
        assert code == 1
        err = json.loads(out)["error"]
        assert err["kind"] == "hypothesis-rejected"
        assert "log(theta_n)/theta_n" in err["message"]

    def test_byte_identical_reruns(self, capsys, bern_file):
        argv = ["llt-bound", bern_file, "--n", "32", "--kappa", "16", "--h", "0.25"]
        _, out1 = run_cli(capsys, argv)
        _, out2 = run_cli(capsys, argv)
        assert out1 == out2

    def test_law_out_writes_pmf_schema(self, capsys, bern_file, tmp_path):
        law_path = tmp_path / "law.json"
        code, _ = run_cli(
            capsys,
            ["llt-bound", bern_file, "--n", "8", "--kappa", "4", "--h", "0.25",
             "--law-out", str(law_path)],
        )
        assert code == 0
        law = json.loads(law_path.read_text())
        assert law["D"] == 1.0 and law["v0"] == 0.0
        masses = dict((int(k), v) for k, v in law["probs"])
        assert masses[4] == pytest.approx(math.comb(8, 4) / 2**8, rel=1e-13)

    def test_csv_sweep_matches_json_values(self, capsys, bern_file):
        argv = ["llt-bound", bern_file, "--n", "16", "--kappa-from", "6",
                "--kappa-to", "10", "--h", "0.25"]
        _, out_json = run_cli(capsys, argv)
        _, out_csv = run_cli(capsys, argv + ["--format", "csv"])
        rows = json.loads(out_json)
        lines = out_csv.strip().split("\n")
        header = lines[0].split(",")
        for row, line in zip(rows, lines[1:]):
            cells = dict(zip(header, line.split(",")))
            for key in ("kappa", "exact", "gaussian", "lower", "upper"):
                assert float(cells[key]) == float(row[key])


class TestOtherCommands:
    def test_split_command(self, capsys, bern_file):
        code, out = run_cli(capsys, ["split", bern_file, "--vartheta", "0.25"])
        assert code == 0
        payload = json.loads(out)
        assert payload["vartheta"] == 0.25
        assert payload["xi_law"]["D"] == 0.5

    def test_split_rejects_bad_level(self, capsys, bern_file):
        code, out = run_cli(capsys, ["split", bern_file, "--vartheta", "0.9"])
        assert code == 1
        assert json.loads(out)["error"]["kind"] == "hypothesis-rejected"

    def test_gamkrelidze_command(self, capsys, bern_file):
        code, out = run_cli(capsys, ["gamkrelidze", bern_file, "--n", "32"])
        assert code == 0
        payload = json.loads(out)
        assert payload["pointwise_check"]["pointwise_ok"] is True
        assert payload["extraction_bound"]["value"] >= payload["M"]

    def test_scenery_moments_command(self, capsys, scenery_file):
        code, out = run_cli(capsys, ["scenery", scenery_file])
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["identity_residual"]) < 1e-10

    def test_scenery_envelope_command(self, capsys, scenery_file):
        code, out = run_cli(capsys, ["scenery", scenery_file, "--kappa", "2", "--h", "0.25"])
        assert code == 0
        payload = json.loads(out)
        assert payload["lower"] <= payload["upper"]

    def test_scenery_profile_map_round_trip(self, capsys, tmp_path):
        path = tmp_path / "model_profile.json"
        path.write_text(
            json.dumps(
                {
                    "x_law": {"v0": 0, "D": 1, "probs": [[0, 1], [1, 1]]},
                    "increments": {"v0": 0, "D": 1, "probs": [[1, 1], [2, 1]]},
                    "n": 3,
                    "vartheta": [[r, 0.5 / (1 + 0.2 * r)] for r in range(1, 7)],
                }
            )
        )
        code, out = run_cli(capsys, ["scenery", str(path)])
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["identity_residual"]) < 1e-10

    def test_partition_command(self, capsys):
        code, out = run_cli(capsys, ["partition", "--m", "3", "--n", "10"])
        assert code == 0
        payload = json.loads(out)
        assert payload["q_model"] == payload["q_enum"] == 3

    def test_validate_command(self, capsys, bern_file):
        code, out = run_cli(capsys, ["validate", bern_file])
        assert code == 0
        payload = json.loads(out)
        assert payload["all_pass"] is True
        names = {c["name"] for c in payload["checks"]}
        assert "reconstruction_pointwise" in names


class TestErrorsAndOverrides:
    def test_malformed_json_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, out = run_cli(capsys, ["characteristics", str(bad)])
        assert code == 2
        assert json.loads(out)["error"]["kind"] == "input-error"

    def test_missing_file_exits_2(self, capsys):
        code, out = run_cli(capsys, ["characteristics", "/nonexistent/x.json"])
        assert code == 2

    def test_constants_env_override(self, capsys, bern_file, tmp_path, monkeypatch):
        consts = tmp_path / "consts.json"
        consts.write_text(json.dumps({"c0": 0.25, "ce": 1.0}))
        monkeypatch.setenv("LLT_CONSTANTS", str(consts))
        code, out = run_cli(
            capsys, ["llt-bound", bern_file, "--n", "32", "--kappa", "16", "--h", "0.25"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["constants"]["c0"] == 0.25
        assert payload["constants"]["ce"] == 1.0
