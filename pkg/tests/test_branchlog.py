import cmath
import math

import numpy as np
import pytest

from okalab.branchlog import (
    BranchedPoint,
    LoopPath,
    adaptive_winding,
    continue_branch,
    principal_branch,
    sample_loop,
    winding_number,
)
from okalab.errors import ContinuationError, DomainError, WindingRejected

TWO_PI = 2 * math.pi


@pytest.mark.parametrize(
    "z, expected",
    [(1, 0j), (math.e, 1 + 0j), (1j, 1j * math.pi / 2), (-1, 1j * math.pi), (-1 - 0j, 1j * math.pi)],
)
def test_principal_branch(z, expected):
    b = principal_branch(z)
    assert b.log_value == pytest.approx(expected, abs=1e-15)
    assert -math.pi < b.log_value.imag <= math.pi


def test_principal_branch_rejects_zero():
    with pytest.raises(DomainError):
        principal_branch(0)


def test_branched_point_checks_log():
    with pytest.raises(DomainError):
        BranchedPoint(2, 0.0)
    BranchedPoint(2, math.log(2) + 4j * math.pi)


def test_continue_ccw_and_cw():
    start = principal_branch(1)
    ccw = continue_branch(start, LoopPath.circle(1.0, 64, turns=1))
    cw = continue_branch(start, LoopPath.circle(1.0, 64, turns=-1))
    assert ccw.point == 1
    assert ccw.log_value == pytest.approx(2j * math.pi, abs=1e-12)
    assert cw.log_value == pytest.approx(-2j * math.pi, abs=1e-12)


def test_continue_twice_around():
    end = continue_branch(principal_branch(1), LoopPath.circle(1.0, 32, turns=2))
    assert end.log_value == pytest.approx(4j * math.pi, abs=1e-12)


def test_constant_path_is_identity():
    start = BranchedPoint(2, math.log(2))
    end = continue_branch(start, LoopPath(np.full(10, 2 + 0j), closed=False))
    assert end == start


def test_open_path_half_turn():
    t = np.linspace(0, math.pi, 40)
    end = continue_branch(principal_branch(3), LoopPath(3 * np.exp(1j * t), closed=False))
    assert end.log_value == pytest.approx(math.log(3) + 1j * math.pi, abs=1e-12)


def test_continuation_rejects_coarse_or_misplaced_paths():
    with pytest.raises(ContinuationError):
        continue_branch(principal_branch(1), LoopPath(np.exp(3j * TWO_PI * np.arange(8) / 8)))
    with pytest.raises(ContinuationError):
        continue_branch(principal_branch(2), LoopPath.circle(1.0, 64))


def test_loop_path_invariants():
    with pytest.raises(DomainError):
        LoopPath(np.ones(7))
    with pytest.raises(DomainError):
        LoopPath(np.array([1, 1, 1, 0, 1, 1, 1, 1], dtype=complex))


@pytest.mark.parametrize("power, expected", [(1, 1), (0, 0), (-2, -2), (5, 5)])
def test_winding_of_monomials(power, expected):
    w = np.exp(1j * TWO_PI * np.arange(128) / 128)
    values = w**power if power else np.full(128, 5 + 0j)
    res = winding_number(values)
    assert res.winding == expected
    assert res.residual < 1e-9


def test_winding_rejects_zero_and_coarse_samples():
    with pytest.raises(WindingRejected):
        winding_number(np.array([1, 0, 1j], dtype=complex))
    w = np.exp(1j * TWO_PI * np.arange(8) / 8)
    with pytest.raises(WindingRejected):
        winding_number(w**3)


def test_sample_loop_refines_only_where_needed():
    # the phase of w^40 turns 40 times; 64 samples are too coarse
    t, v = sample_loop(lambda t: np.exp(40j * t), n=64)
    assert v.size > 64
    assert np.all(np.diff(t) > 0)
    assert winding_number(v).winding == 40


def test_adaptive_winding_gives_up():
    with pytest.raises(WindingRejected):
        # phases that never settle, however fine the grid
        noise = np.random.default_rng(0)
        adaptive_winding(lambda t: np.exp(1j * noise.uniform(0, TWO_PI, t.size)), n=8, max_doublings=2)


def test_from_function_path():
    path = LoopPath.from_function(lambda t: 2 * np.exp(1j * t))
    end = continue_branch(principal_branch(2), path)
    assert end.log_value == pytest.approx(math.log(2) + TWO_PI * 1j, abs=1e-12)
