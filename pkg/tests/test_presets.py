import itertools

import numpy as np
import pytest

from lindblad_forge.basis import symmetric_basis_4
from lindblad_forge.constraints import full_validate, spectral_check
from lindblad_forge.decomp import decay_induced_dephasing, pure_dephasing, rates_from_pure_dephasing, reduced_matrix
from lindblad_forge.dissipator import build_phenomenological
from lindblad_forge.errors import ValidationError
from lindblad_forge.presets import (
    PRESETS,
    build_preset,
    compare_lambda_v,
    get_preset,
    list_presets,
    tripod_dephasing_conditions,
    tripod_gd,
)


def b_prime(alpha, beta):
    return reduced_matrix(tripod_gd(1.0, alpha, beta), symmetric_basis_4()).b


def test_preset_catalogue():
    assert list_presets() == [
        "ladder3",
        "lambda3_symmetric",
        "v3_symmetric",
        "degenerate4",
        "degenerate4_clebsch_gordan",
        "tripod",
        "inverted_tripod",
    ]
    for name in list_presets():
        p = get_preset(name)
        assert p.describe().startswith(f"{name} (N={p.N})")


@pytest.mark.parametrize("name", list_presets())
def test_default_presets_are_completely_positive(name):
    rates = build_preset(name)
    assert rates.N == PRESETS[name].N
    assert full_validate(rates).cp_ok


def test_unknown_names_and_parameters():
    with pytest.raises(KeyError):
        get_preset("bogus")
    with pytest.raises(ValidationError):
        build_preset("tripod", delta=1.0)


def test_tripod_decay_induced_rates():
    g = build_preset("tripod", gamma=1.5).gamma
    assert np.allclose([g[0, 3], g[1, 3], g[2, 3]], 0.5)
    Gp = decay_induced_dephasing(g)
    assert np.allclose([Gp[0, 3], Gp[1, 3], Gp[2, 3]], 0.75)
    assert np.allclose([Gp[0, 1], Gp[0, 2], Gp[1, 2]], 0.0)


def test_inverted_tripod_decay_induced_rates():
    g = build_preset("inverted_tripod", gamma=0.8).gamma
    assert np.allclose([g[3, 0], g[3, 1], g[3, 2]], 0.8)
    Gp = decay_induced_dephasing(g)
    assert np.allclose([Gp[0, 1], Gp[1, 2], Gp[0, 2]], 0.8)
    assert np.allclose([Gp[0, 3], Gp[1, 3], Gp[2, 3]], 0.4)


def test_lambda_observed_rates():
    rates = build_preset("lambda3_symmetric", gamma=1.0, dephasing=0.25, alpha=2.0)
    assert rates.Gamma[0, 1] == pytest.approx(0.25 + 0.5)
    assert rates.Gamma[1, 2] == pytest.approx(0.25 + 0.5)
    assert rates.Gamma[0, 2] == pytest.approx(0.5)


def test_zero_lambda_is_zero_dissipator():
    rates = build_preset("lambda3_symmetric", gamma=0.0, dephasing=0.0)
    assert np.all(build_phenomenological(rates) == 0)


@pytest.mark.parametrize("name", ["lambda3_symmetric", "v3_symmetric", "ladder3"])
def test_three_level_alpha_range(name):
    assert full_validate(build_preset(name, dephasing=0.5, alpha=4.0)).cp_ok
    with pytest.raises(ValidationError):
        build_preset(name, dephasing=0.5, alpha=4.0001)
    with pytest.raises(ValidationError):
        build_preset(name, dephasing=0.5, alpha=-0.1)


def test_lambda_outside_range_is_really_forbidden():
    gamma = np.zeros((3, 3))
    Gd = np.array([[0, 1, 4.2], [1, 0, 1], [4.2, 1, 0]])
    assert not spectral_check(rates_from_pure_dephasing(gamma, Gd)).cp_ok


def test_negative_rate_parameter():
    with pytest.raises(ValidationError):
        build_preset("tripod", gamma=-1.0)


def test_clebsch_gordan_branching():
    g = build_preset("degenerate4_clebsch_gordan", gamma=3.0).gamma
    assert g[0, 1] == pytest.approx(1.0) and g[2, 3] == pytest.approx(1.0)
    assert g[2, 1] == pytest.approx(2.0) and g[0, 3] == pytest.approx(2.0)
    Gp = decay_induced_dephasing(g)
    assert Gp[0, 2] == 0
    assert np.allclose([Gp[0, 1], Gp[1, 2], Gp[0, 3], Gp[2, 3]], 1.5)
    assert Gp[1, 3] == pytest.approx(3.0)


def test_degenerate_alpha_bound():
    assert full_validate(build_preset("degenerate4_clebsch_gordan", alpha=4.0)).cp_ok
    with pytest.raises(ValidationError):
        build_preset("degenerate4_clebsch_gordan", alpha=4.5)


def test_decoherence_free_ground_pair_forces_equal_rates():
    with pytest.raises(ValidationError):
        build_preset("degenerate4", dephasing=0.5, dephasing_cross=0.6, dephasing_ground=0.0)
    rates = build_preset("degenerate4", dephasing=0.5, dephasing_cross=0.6, dephasing_ground=0.1)
    assert full_validate(rates).cp_ok


def test_degenerate_unequal_pairs_need_ground_dephasing():
    # (G1 - G2)^2 <= 4 G13 G24 with G24 = alpha G1
    with pytest.raises(ValidationError):
        build_preset("degenerate4", dephasing=0.5, dephasing_cross=1.5, dephasing_ground=0.1, alpha=1.0)


def test_lambda_v_comparison():
    c = compare_lambda_v(1.0, 1.0, 0.0, 0.0)
    assert c.Gamma13_lambda == pytest.approx(0.0) and c.Gamma13_v == pytest.approx(1.0)
    assert c.Gamma12 == pytest.approx(1.5) and c.Gamma23 == pytest.approx(1.5)
    assert not c.lambda_exceeds_v
    c = compare_lambda_v(1.0, 1.0, 4.0, 0.0)
    assert c.Gamma13_lambda == pytest.approx(4.0) and c.Gamma13_v == pytest.approx(1.0)
    assert c.lambda_exceeds_v
    c = compare_lambda_v(0.0, 0.7, 1.0, 1.0)
    assert c.Gamma13_lambda == c.Gamma13_v


def test_tripod_reduced_matrix_has_beta_eigenvector():
    alpha, beta = 1.3, 2.1
    basis = symmetric_basis_4()
    D = np.diag([1.0, 0.0, -1.0, 0.0]) / np.sqrt(2)
    c = np.array([np.vdot(basis.element(basis.labels[k]), D).real for k in basis.diagonal_indices])
    assert np.allclose(b_prime(alpha, beta) @ c, beta * c)


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (2.0, 4.0), (0.5, 1.0), (3.0, 0.2), (0.0, 0.0)])
def test_tripod_eigenvalues_match_spectrum_of_reduced_matrix(alpha, beta):
    r = tripod_dephasing_conditions(alpha, beta)
    assert r.eigenvalues == pytest.approx(tuple(np.linalg.eigvalsh(b_prime(alpha, beta))), abs=1e-12)


def test_tripod_quadratic_factor():
    # characteristic polynomial of b' equals (beta - x)(x^2 - (p/2) x + q)
    for alpha, beta in itertools.product([0.0, 0.7, 2.0, 3.3], [-1.0, 0.0, 1.5, 4.0]):
        r = tripod_dephasing_conditions(alpha, beta)
        poly = np.poly(b_prime(alpha, beta))
        expected = -np.polymul([-1.0, beta], [1.0, -r.p / 2, r.q])
        assert np.allclose(poly, expected, atol=1e-12)


def test_tripod_symmetric_point():
    r = tripod_dephasing_conditions(1.0, 1.0)
    assert (r.p, r.q) == (4.0, 1.0)
    assert r.eigenvalues == pytest.approx((1.0, 1.0, 1.0))
    assert r.cp_ok


def test_tripod_q_boundary_has_zero_eigenvalue():
    r = tripod_dephasing_conditions(2.0, 4.0)
    assert r.q == 0
    assert r.cp_ok
    assert min(abs(x) for x in r.eigenvalues) < 1e-12


def test_tripod_without_adjacent_dephasing():
    assert not tripod_dephasing_conditions(0.0, 0.5).cp_ok
    assert tripod_dephasing_conditions(0.0, 0.0).cp_ok


def test_tripod_verdict_matches_spectral_on_grid():
    for alpha, beta in itertools.product(np.linspace(0, 5, 26), np.linspace(0, 5, 26)):
        r = tripod_dephasing_conditions(alpha, beta)
        gd = tripod_gd(1.0, alpha, beta)
        assert r.cp_ok == spectral_check(rates_from_pure_dephasing(np.zeros((4, 4)), gd)).cp_ok


def test_tripod_preset_rejects_forbidden_ratios():
    with pytest.raises(ValidationError, match="alpha"):
        build_preset("tripod", alpha=1.0, beta=3.5)
    with pytest.raises(ValidationError):
        build_preset("inverted_tripod", alpha=0.0, beta=0.1)
    assert full_validate(build_preset("inverted_tripod", alpha=2.0, beta=4.0)).cp_ok


def test_tripod_ground_dephasing_shows_in_pure_part():
    rates = build_preset("tripod", gamma=1.0, dephasing=0.5, alpha=2.0, beta=3.0)
    Gd = pure_dephasing(rates)
    assert Gd[1, 2] == pytest.approx(1.0) and Gd[1, 3] == pytest.approx(1.5) and Gd[1, 4] == pytest.approx(0.5)
