"""Property suites; each runs at least 200 generated cases."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from oracles import pair_bruteforce
from okalab.branchlog import LoopPath, continue_branch, principal_branch, winding_number
from okalab.bundlecalc import ExponentMatrix, symbolic_pairing
from okalab.latticeforms import GaussianLatticeVector, HermitianFormSpec, pair_form
from okalab.monodromy import TorusCycle, chern_pairing, fminus, fplus, fplus_shift

CASES = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
T = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)

turns = st.integers(-5, 5)
wobble = st.floats(0.0, 0.6)
phase = st.floats(-math.pi, math.pi)


def loop(k, eps, phi):
    # e^{ikt} (1 + eps e^{i(3t + phi)}) never vanishes for eps < 1 and winds k times
    return np.exp(1j * k * T) * (1 + eps * np.exp(1j * (3 * T + phi)))


@CASES
@given(turns, turns, wobble, wobble, phase, phase)
def test_winding_additivity(a, b, e1, e2, p1, p2):
    f, g = loop(a, e1, p1), loop(b, e2, p2)
    assert winding_number(f * g).winding == winding_number(f).winding + winding_number(g).winding == a + b


@CASES
@given(turns, wobble, phase, st.floats(0.1, 10.0))
def test_winding_conjugation_and_scaling(k, eps, phi, c):
    f = loop(k, eps, phi)
    assert winding_number(np.conj(f)).winding == -k
    assert winding_number(c * f).winding == k
    assert winding_number(1 / f).winding == -k


entries = st.integers(-50, 50)


def matrices(n):
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n).map(ExponentMatrix)


@CASES
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(matrices(n), matrices(n), st.integers(1, n), st.integers(1, n))))
def test_symbolic_pairing_antisymmetric_and_additive(data):
    A, B, a, b = data
    assert symbolic_pairing(A, a, b) == -symbolic_pairing(A, b, a)
    assert symbolic_pairing(A + B, a, b) == symbolic_pairing(A, a, b) + symbolic_pairing(B, a, b)
    assert symbolic_pairing(-A, a, b) == -symbolic_pairing(A, a, b)


@CASES
@given(
    st.lists(st.sampled_from(["+", "-", "lam"]), min_size=1, max_size=3),
    st.sampled_from([0.5, 1.3, 2.0]),
)
def test_chern_pairing_additive_and_antisymmetric(names, r_w):
    pick = {"+": fplus(), "-": fminus(), "lam": fplus_shift(1.0)}
    handles = [pick[x] for x in names]
    prod = handles[0]
    for h in handles[1:]:
        prod = prod * h
    T_ = TorusCycle(1.0, r_w)
    total = chern_pairing(prod, T_, n=32).pairing
    assert total == sum(chern_pairing(h, T_, n=32).pairing for h in handles)
    assert chern_pairing(prod, T_.reversed(), n=32).pairing == -total


nonzero = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False)


@CASES
@given(nonzero, st.integers(-4, 4))
def test_branch_round_trip(z, k):
    b = principal_branch(z)
    assert cmath.exp(b.log_value) == pytest.approx(z, rel=1e-12)
    assert -math.pi < b.theta <= math.pi
    back = b.shifted(k).shifted(-k)
    assert back.point == b.point
    assert back.log_value == pytest.approx(b.log_value, abs=1e-13 * (1 + abs(k)))
    assume(k != 0)
    path = LoopPath.circle(abs(z), n=32, turns=k, center_angle=math.atan2(z.imag, z.real))
    moved = continue_branch(principal_branch(complex(path.samples[0])), path)
    start = principal_branch(complex(path.samples[0]))
    assert moved.log_value.imag - start.log_value.imag == pytest.approx(2 * math.pi * k, abs=1e-9)
    assert moved.log_value.real == start.log_value.real


small = st.integers(-6, 6)


def vectors(n):
    return st.tuples(st.lists(small, min_size=n, max_size=n), st.lists(small, min_size=n, max_size=n)).map(
        lambda ab: GaussianLatticeVector(tuple(ab[0]), tuple(ab[1]))
    )


@CASES
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(-5, 9), st.booleans(), vectors(n), vectors(n), vectors(n), small, small)
    )
)
def test_lattice_form_real_bilinear_alternating(data):
    n, d, offdiag, u, u2, v, a, b = data
    om = HermitianFormSpec(n, d, offdiag)
    p = pair_form(om, u, v)  # raises if the value had an imaginary part
    assert p.denominator == 1
    assert pair_form(om, v, u) == -p
    assert pair_form(om, u, u) == 0
    assert pair_form(om, a * u + b * u2, v) == a * p + b * pair_form(om, u2, v)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 3).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 5), vectors(n), vectors(n))))
def test_lattice_form_matches_bruteforce(data):
    n, d, u, v = data
    assert pair_form(HermitianFormSpec(n, d), u, v) == pair_bruteforce(n, d, u.real_coords(), v.real_coords())
