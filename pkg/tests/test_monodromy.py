import math

import pytest

from conftest import random_branch, random_w
from okalab.bundlecalc import symbolic_pairing
from okalab.branchlog import principal_branch
from okalab.errors import DivisorMeetsTorusError, DomainError, TransversalityError
from okalab.monodromy import (
    DEFAULT_TORUS,
    TorusCycle,
    chern_pairing,
    fminus,
    fplus,
    fplus_shift,
    handle_from_spec,
    torus_intersection_count,
    w_loop_factor,
    z_loop_factor,
)

HANDLES = {
    "fplus": (fplus(), 1),
    "fminus": (fminus(), -1),
    "fplus*fminus": (fplus() * fminus(), 0),
    "fplus_lam": (fplus_shift(1.0), 1),
    "fplus*fplus": (fplus() * fplus(), 2),
    "fminus*fminus*fplus_lam": (fminus() * fminus() * fplus_shift(1.0), -1),
}


@pytest.mark.parametrize("name", HANDLES)
def test_pairing_on_default_torus(name):
    f, expected = HANDLES[name]
    r = chern_pairing(f)
    assert r.pairing == expected
    assert r.residual < 0.1


@pytest.mark.parametrize("name", HANDLES)
def test_three_oracles_agree(name):
    f, expected = HANDLES[name]
    for T in (DEFAULT_TORUS, TorusCycle(0.5, 2.0), TorusCycle(2.0, 0.7)):
        assert chern_pairing(f, T).pairing == torus_intersection_count(f, T) == expected
    assert symbolic_pairing(f.exponent_matrix(), 1, 2) == expected


def test_orientation_reverses_sign():
    T = TorusCycle(1.0, 1.3, -1)
    assert chern_pairing(fplus(), T).pairing == -1
    assert torus_intersection_count(fplus(), T) == -1
    assert T.reversed() == DEFAULT_TORUS


def test_handle_spec_parsing():
    assert handle_from_spec("fplus*fminus").exponent_row() == 0
    assert handle_from_spec("fplus_lam", 2.0).factors[0].lam == 2.0
    with pytest.raises(DomainError):
        handle_from_spec("fzero")


def test_z_loop_multipliers(rng):
    for _ in range(20):
        zb, w = random_branch(rng), random_w(rng)
        assert z_loop_factor(fplus(), zb, w) == pytest.approx(w, rel=1e-9)
        assert z_loop_factor(fminus(), zb, w) == pytest.approx(1 / w, rel=1e-9)
        assert w_loop_factor(fplus(), zb, w) == pytest.approx(1, abs=1e-9)


def test_z_loop_on_divisor_rejected():
    with pytest.raises(DivisorMeetsTorusError):
        z_loop_factor(fplus(), principal_branch(1), 1.0)


def test_w_circle_through_sheet_rejected():
    # |w| = 1 contains the sheet w = 1 over z = 1
    with pytest.raises(DivisorMeetsTorusError):
        w_loop_factor(fplus(), principal_branch(1), -1.0)


def test_torus_on_sheet_modulus_rejected():
    # r_w = e^{2 pi}: the k = 1 sheet over z = 1 lies on the w-circle at phi = 0
    with pytest.raises(DivisorMeetsTorusError):
        chern_pairing(fplus(), TorusCycle(1.0, math.exp(2 * math.pi)))


def test_intersection_count_validates_slope():
    with pytest.raises(TransversalityError):
        torus_intersection_count(fplus(), DEFAULT_TORUS, slope_floor=2.0)


def test_torus_validation():
    with pytest.raises(DomainError):
        TorusCycle(0.0, 1.0)
    with pytest.raises(DomainError):
        TorusCycle(1.0, 1.0, 2)
