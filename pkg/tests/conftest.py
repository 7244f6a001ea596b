"""Shared fixtures and random-instance generators."""

from __future__ import annotations

import numpy as np
import pytest

from lltkit import LatticePmf, make_pmf


@pytest.fixture
def fair_bernoulli() -> LatticePmf:
    return make_pmf(0.0, 1.0, [(0, 1.0), (1, 1.0)])


@pytest.fixture
def uniform3() -> LatticePmf:
    return make_pmf(0.0, 1.0, [(0, 1.0), (1, 1.0), (2, 1.0)])


@pytest.fixture
def point_mass() -> LatticePmf:
    return make_pmf(0.0, 1.0, [(0, 1.0)])


_SPANS = (0.25, 0.5, 1.0, 2.0, 3.5)


def random_pmf(
    rng: np.random.Generator,
    max_support: int = 21,
    require_theta: bool = False,
) -> LatticePmf:
    """Random finite pmf; with ``require_theta`` at least one adjacent pair of
    lattice points carries mass, so theta > 0."""
    size = int(rng.integers(1, max_support + 1))
    lo = int(rng.integers(-12, 12))
    width = max(size, int(rng.integers(size, 2 * size + 1)))
    ks = lo + rng.choice(width, size=min(size, width), replace=False)
    ks = sorted(int(k) for k in ks)
    if require_theta and not any(b - a == 1 for a, b in zip(ks, ks[1:])):
        ks.append(ks[0] + 1)
        ks = sorted(set(ks))
    weights = rng.random(len(ks)) + 1e-3
    d = float(_SPANS[int(rng.integers(0, len(_SPANS)))])
    v0 = float(rng.uniform(-2.0, 2.0))
    return make_pmf(v0, d, list(zip(ks, weights)))
