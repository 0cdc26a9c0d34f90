"""
Tests for the Born-rule simulation of the quantum switch and its causal bounds
"""

from math import sqrt

import numpy as np
import pytest

from config import LP_TOL, PROB_TOL
from modules.errors import MeasurementConfigError, PreconditionError
from modules.quantumcert import (
    CLAIM3_BOUND, I3_SCALE, RHS_QUOTED, MeasurementSettings, architecture_deviation, born_probs,
    causal_bound, certify, claim3_check, claim3_value, deterministic_causal_bound, eval_guess_game,
    eval_i3, eval_inequality, eval_lgyni_terms, fourier_basis, i3_slice, local_i3_bound,
    ns_i3_bound, one_way_game_maxima, unconstrained_bound, uniform_probs,
)

I3_PRINTED_QUANTUM = (30 + 14 * sqrt(3)) / 27
I3_TAILORED_QUANTUM = 2 * (1 + sqrt(3)) / 3


@pytest.fixture(scope="module")
def tailored():
    return born_probs(MeasurementSettings.preset("tailored"))


@pytest.fixture(scope="module")
def postselected():
    return born_probs(MeasurementSettings.preset("postselected"))


def test_fourier_basis_orthonormal():
    basis = fourier_basis(0.25)
    assert np.allclose(basis.conj() @ basis.T, np.eye(3))
    assert np.allclose(fourier_basis(None), np.eye(3))


def test_unknown_preset():
    with pytest.raises(MeasurementConfigError):
        MeasurementSettings.preset("bogus")


def test_unknown_reading(tailored):
    with pytest.raises(PreconditionError):
        eval_i3(tailored, "other")


def test_table_is_normalized(tailored):
    assert tailored.shape == (2, 2, 2, 2, 2, 2, 3, 3)
    assert np.allclose(tailored.sum(axis=(4, 5, 6, 7)), 1.0)
    assert max(architecture_deviation(tailored).values()) < PROB_TOL


def test_qutrit_correlations(tailored):
    # p(b = a3 + k | x3, y) = sin^2(pi d) / (9 sin^2(pi d / 3)), d = k + theta - zeta
    q = i3_slice(tailored)
    main = sum(q[0, 0, a, a] for a in range(3))
    side = sum(q[0, 0, a, (a + 1) % 3] for a in range(3))
    assert main == pytest.approx((4 + 2 * sqrt(3)) / 9, abs=1e-12)
    assert side == pytest.approx(1 / 9, abs=1e-12)


def test_game_terms(tailored, postselected):
    assert sum(eval_lgyni_terms(tailored)) + eval_guess_game(tailored) == pytest.approx(13 / 18)
    t0, t1 = eval_lgyni_terms(postselected)
    assert (t0, t1) == (pytest.approx(1 / 3), pytest.approx(1 / 3))
    assert eval_guess_game(postselected) == pytest.approx(1 / 6)


def test_i3_values(tailored):
    assert eval_i3(tailored, "printed") == pytest.approx(I3_PRINTED_QUANTUM, abs=1e-10)
    assert eval_i3(tailored, "tailored") == pytest.approx(I3_TAILORED_QUANTUM, abs=1e-10)


def test_uniform_noise():
    report = eval_inequality(uniform_probs(), "printed")
    assert report.alpha == pytest.approx(5 / 8)
    assert report.lhs == pytest.approx(49 / 72)
    assert report.verdict == "not_violated"


def test_inequality_on_the_switch(tailored):
    report = eval_inequality(tailored, "printed", preset="tailored")
    assert report.lhs == pytest.approx(13 / 18 + I3_SCALE * I3_PRINTED_QUANTUM, abs=1e-10)
    assert report.rhs_quoted == pytest.approx(7 / 8 + 1 / (2 * sqrt(3)))
    assert report.verdict == "not_violated"


def test_bipartite_i3_bounds():
    assert local_i3_bound("printed") == pytest.approx((3 + 5 * sqrt(3)) / 6)
    assert local_i3_bound("tailored") == pytest.approx((7 * sqrt(3) - 3) / 6)
    assert ns_i3_bound("printed") == pytest.approx(4 / sqrt(3), abs=LP_TOL)


def test_claim3(tailored):
    check = claim3_check()
    assert check["ok"]
    assert check["optimum"] <= CLAIM3_BOUND + LP_TOL
    quantum = claim3_value(i3_slice(tailored))
    assert quantum == pytest.approx(I3_SCALE * I3_PRINTED_QUANTUM + 1 / 12, abs=1e-10)
    assert quantum <= check["optimum"] + LP_TOL


def test_one_way_games():
    games = one_way_game_maxima()
    assert games["S1<=S2"] == {"lgyni_0": "1", "lgyni_1": "3/4", "guess_f": "1"}
    assert games["S2<=S1"] == {"lgyni_0": "3/4", "lgyni_1": "1", "guess_f": "1"}
    assert games["no_signaling"]["lgyni_0"] == "3/4"


def test_causal_bounds(tailored):
    bound = causal_bound("printed")
    ceiling = unconstrained_bound("printed")
    assert ceiling == pytest.approx(1 + 1 / (sqrt(3) * (3 + sqrt(3))), abs=LP_TOL)
    assert 1 - LP_TOL <= bound.value <= ceiling + LP_TOL
    assert bound.per_set["no_signaling"] <= bound.value + LP_TOL
    deterministic = deterministic_causal_bound("printed")
    assert 1 - LP_TOL <= deterministic["value"] <= bound.value + LP_TOL
    assert eval_inequality(tailored, "printed", bound=bound.value).lhs < bound.value


def test_certify_reports_divergences():
    report = certify("tailored", "printed")
    assert report.verdict == "not_violated"
    assert report.claim3_ok
    assert report.lhs < report.rhs_lp
    assert report.flags
    assert any("guess game F" in flag for flag in report.flags)
    assert report.to_json()["alpha_terms"] == pytest.approx(list(report.alpha_terms))
    assert RHS_QUOTED == report.rhs_quoted
