"""Generator assembly and spectrum taxonomy."""

import json

import numpy as np
import pytest

import oracles
from conftest import DELTA_FIELD, make_generator, random_density_matrix
from spinbath.bath import BathThermal, RateSet
from spinbath.errors import DegenerateSpectrumError
from spinbath.liouvillian import (
    GeneratorMatrix,
    ModelParams,
    analytic_slow_eigenpair,
    build_generator,
    classify_spectrum,
    generator_to_json,
    hamiltonian_matrix,
    mode_coefficients,
    oscillatory_alpha_pattern,
    slow_alpha_pattern,
    spectrum_to_json,
    thermal_alpha,
)
from spinbath.states import bell_singlet, density_to_bloch, flat_index


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


GENERATOR_CASES = [
    dict(deficit=0.05, ratio=0.9),
    dict(deficit=0.2, ratio=0.5, delta_field=3.0, gamma0=0.7),
    dict(deficit=1.0, ratio=1.0, delta_field=25.0, gamma0=2.0),
    dict(deficit=2.0, ratio=0.8),
    dict(
        deficit=0.05,
        ratio=0.9,
        lamb_a=-0.17,
        lamb_b=-0.49,
        exchange_xi=0.31,
        include_lamb=True,
        include_exchange=True,
    ),
]


@pytest.mark.parametrize("case", GENERATOR_CASES)
def test_generator_matches_kronecker_oracle(case):
    """Column-projection assembly vs an independent rho-space build."""
    case = dict(case)
    include_lamb = case.pop("include_lamb", False)
    include_exchange = case.pop("include_exchange", False)
    gen = make_generator(
        case["deficit"],
        case["ratio"],
        case.get("delta_field", DELTA_FIELD),
        case.get("gamma0", 1.0),
        lamb_a=case.get("lamb_a", 0.0),
        lamb_b=case.get("lamb_b", 0.0),
        exchange_xi=case.get("exchange_xi", 0.0),
        include_lamb=include_lamb,
        include_exchange=include_exchange,
    )
    occupation = (1.0 / case["ratio"] - 1.0) / 2.0
    reference = oracles.liouvillian_alpha_space(
        case.get("delta_field", DELTA_FIELD),
        case.get("gamma0", 1.0),
        occupation,
        case["deficit"],
        lamb_a=case.get("lamb_a", 0.0) if include_lamb else 0.0,
        lamb_b=case.get("lamb_b", 0.0) if include_lamb else 0.0,
        exchange_xi=case.get("exchange_xi", 0.0) if include_exchange else 0.0,
    )
    reference[0] = 0.0
    scale = np.max(np.abs(reference))
    assert np.max(np.abs(gen.entries - reference)) < 1e-12 * scale


def test_first_row_zero_and_real(reference_generator):
    assert np.all(reference_generator.entries[0] == 0.0)
    assert reference_generator.entries.dtype == np.float64


def test_entries_read_only(reference_generator):
    with pytest.raises(ValueError):
        reference_generator.entries[1, 1] = 0.0


def test_apply_accepts_vectors_and_pauli(reference_generator):
    vec = bell_singlet()
    out = reference_generator.apply(vec)
    assert np.array_equal(out, reference_generator.entries @ vec.alpha)


def test_generator_shape_validation(reference_generator):
    with pytest.raises(ValueError):
        GeneratorMatrix(
            np.zeros((4, 4)), ModelParams(1.0), reference_generator.rates
        )


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0.0)
    with pytest.raises(ValueError):
        ModelParams(-1.0)


def test_hamiltonian_matrix_matches_oracle():
    params = ModelParams(7.0, lamb_a=0.3, lamb_b=-0.2, exchange_xi=0.1)
    assert np.allclose(
        hamiltonian_matrix(params), oracles.hamiltonian(7.0), atol=1e-15
    )
    assert np.allclose(
        hamiltonian_matrix(params, include_lamb=True, include_exchange=True),
        oracles.hamiltonian(7.0, 0.3, -0.2, 0.1),
        atol=1e-15,
    )


def test_pure_commutator_generator_is_antisymmetric_spectrum():
    """No dissipation: eigenvalues purely imaginary, from {0, +-iD, +-2iD}."""
    rates = RateSet(1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    gen = build_generator(ModelParams(7.0), rates)
    values = np.linalg.eigvals(gen.entries)
    assert np.max(np.abs(values.real)) < 1e-10
    allowed = {0.0, 7.0, -7.0, 14.0, -14.0}
    assert {round(v, 9) for v in values.imag} <= allowed


def test_hermiticity_preservation(reference_generator, rng):
    """L alpha stays real and maps back to a Hermitian matrix derivative."""
    alpha = density_to_bloch(random_density_matrix(rng)).alpha
    alpha_dot = reference_generator.apply(alpha)
    rho_dot = oracles.density_from_alpha(alpha_dot)
    assert np.max(np.abs(rho_dot - rho_dot.conj().T)) < 1e-12
    assert abs(np.trace(rho_dot)) < 1e-12  # alpha_00 frozen


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("deficit", [0.01, 0.05, 0.2])
@pytest.mark.parametrize("ratio", [0.5, 0.9, 0.99])
def test_classification_counts_and_structure(deficit, ratio):
    report = classify_spectrum(make_generator(deficit, ratio))
    assert report.labels.count("thermal") == 1
    assert report.labels.count("slow") == 1
    assert report.labels.count("oscillatory") == 2
    assert report.labels.count("fast") == 12
    assert report.thermal_index == 0 and report.slow_index == 1
    assert report.oscillatory_indices == (2, 3)
    # zero mode isolated, everything else strictly decaying
    assert abs(report.eigenvalues[0]) < 1e-9
    assert np.all(report.eigenvalues[1:].real < 0.0)
    assert report.fast_violations == ()


def test_spectrum_closed_under_conjugation(reference_spectrum):
    values = reference_spectrum.eigenvalues
    sorted_vals = np.sort_complex(values)
    assert np.allclose(sorted_vals, np.sort_complex(values.conj()), atol=1e-9)
    # the oscillatory pair itself is conjugate, positive imaginary first
    assert values[2].imag > 0 > values[3].imag
    assert values[2] == pytest.approx(values[3].conjugate(), abs=1e-9)


def test_oscillatory_pair_sits_at_the_splitting(reference_spectrum):
    assert reference_spectrum.eigenvalues[2].imag == pytest.approx(DELTA_FIELD, rel=1e-6)
    # first-order width: -(1/2) gamma0 (1 - R + 2 delta - delta R)
    expected = -0.5 * (1.0 - 0.9 + 2.0 * 0.05 - 0.05 * 0.9)
    assert reference_spectrum.eigenvalues[2].real == pytest.approx(expected, rel=0.1)


def test_thermal_mode_matches_pattern(reference_spectrum):
    expected = thermal_alpha(0.9).alpha
    vec = reference_spectrum.right[:, 0]
    assert np.max(np.abs(vec - expected)) < 1e-8


def test_thermal_mode_is_annihilated(reference_generator):
    vec = thermal_alpha(0.9).alpha
    # the true null vector differs from the closed form only at roundoff
    assert np.max(np.abs(reference_generator.apply(vec))) < 1e-7


def test_slow_mode_normalization_and_pattern():
    report = classify_spectrum(make_generator(0.01, 0.9))
    vec = report.right[:, 1].real
    assert vec[flat_index(2, 2)] == pytest.approx(1.0)
    pattern = slow_alpha_pattern(0.9).alpha
    cosine = abs(np.dot(vec, pattern)) / (
        np.linalg.norm(vec) * np.linalg.norm(pattern)
    )
    assert cosine > 0.999


def test_slow_eigenvalue_first_order_formula():
    """lambda_1 = -(1+3N) delta gamma0 within 10% on the small-N grid."""
    for deficit in (0.01, 0.02, 0.05):
        for occupation in (0.0, 0.05, 0.1):
            gen = make_generator(deficit, 1.0 / (1.0 + 2.0 * occupation))
            numeric = classify_spectrum(gen).slow_eigenvalue
            formula, _ = analytic_slow_eigenpair(gen.rates)
            assert numeric == pytest.approx(formula, rel=0.10)
            assert numeric < 0


def test_slow_eigenvalue_vanishes_linearly_with_deficit():
    values = []
    for deficit in (1e-2, 1e-3, 1e-4):
        report = classify_spectrum(make_generator(deficit, 0.9))
        values.append(report.slow_eigenvalue)
    assert values[0] / values[1] == pytest.approx(10.0, rel=0.05)
    assert values[1] / values[2] == pytest.approx(10.0, rel=0.05)


def test_slow_eigenvalue_linear_in_occupation():
    """Linearity in N over [0, 5]: R^2 of a straight-line fit >= 0.99."""
    occupations = np.linspace(0.0, 5.0, 11)
    lams = np.array(
        [
            classify_spectrum(
                make_generator(0.01, 1.0 / (1.0 + 2.0 * n))
            ).slow_eigenvalue
            for n in occupations
        ]
    )
    coeffs = np.polyfit(occupations, lams, 1)
    residual = lams - np.polyval(coeffs, occupations)
    r_squared = 1.0 - np.sum(residual**2) / np.sum((lams - lams.mean()) ** 2)
    assert r_squared >= 0.99
    assert coeffs[0] < 0  # decays faster when the bath is hotter


def test_oscillatory_limit_approaches_bare_splitting():
    """R -> 1, deficit -> 0: real parts -> 0, imaginary parts -> -+Delta."""
    report = classify_spectrum(make_generator(1e-6, 1.0))
    osc = report.eigenvalues[2]
    assert abs(osc.real) < 1e-5
    assert osc.imag == pytest.approx(DELTA_FIELD, abs=1e-6)
    pattern = oscillatory_alpha_pattern()
    pattern = pattern / np.linalg.norm(pattern)
    # the documented convention: pattern belongs to the -iDelta branch
    overlap = abs(np.vdot(pattern, report.right[:, 3]))
    assert overlap > 0.9999


def test_biorthonormality(reference_spectrum):
    gram = reference_spectrum.left.conj() @ reference_spectrum.right
    assert np.max(np.abs(gram - np.eye(16))) < 1e-8


def test_fast_modes_obey_rate_bound():
    for deficit, ratio in ((0.01, 0.5), (0.05, 0.9), (0.2, 0.99), (0.8, 0.7)):
        report = classify_spectrum(make_generator(deficit, ratio))
        assert report.fast_violations == ()
        bound = -0.5 / ratio
        assert np.all(report.eigenvalues[4:].real <= bound + 1e-9)


def test_degenerate_deficit_refused():
    gen = make_generator(0.0, 0.9)
    with pytest.raises(DegenerateSpectrumError):
        classify_spectrum(gen)


def test_uncorrelated_baths_are_degenerate_too():
    """deficit = 1: two independent qubits, slow label is ambiguous."""
    with pytest.raises(DegenerateSpectrumError, match="slow"):
        classify_spectrum(make_generator(1.0, 0.7))


def test_anticorrelated_limit_gains_a_second_zero_mode():
    """deficit = 2 protects the triplet the way deficit = 0 protects the
    singlet, so the null space is again two-dimensional."""
    with pytest.raises(DegenerateSpectrumError, match="zero mode") as info:
        classify_spectrum(make_generator(2.0, 0.7))
    assert len(info.value.candidates) == 2


def test_mode_coefficients_reconstruct_states(reference_spectrum, rng):
    for _ in range(20):
        alpha = density_to_bloch(random_density_matrix(rng)).alpha
        coeff = mode_coefficients(reference_spectrum, alpha)
        assert coeff[0].real == pytest.approx(1.0, abs=1e-10)
        assert abs(coeff[0].imag) < 1e-10
        recon = (reference_spectrum.right @ coeff).real
        assert np.max(np.abs(recon - alpha)) < 1e-8


def test_thermal_state_has_trivial_coefficients(reference_spectrum):
    coeff = mode_coefficients(reference_spectrum, thermal_alpha(0.9))
    assert coeff[0].real == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(coeff[1:])) < 1e-8


def test_singlet_lives_in_the_slow_sector():
    """At small deficit the singlet is (almost) thermal + slow only."""
    report = classify_spectrum(make_generator(0.01, 0.9))
    coeff = mode_coefficients(report, bell_singlet())
    assert np.max(np.abs(coeff[2:])) < 0.05
    # a1 = (Lambda - R^2)/(3 + R^2) = -1 exactly for the singlet
    assert coeff[1].real == pytest.approx(-1.0, rel=0.02)


def test_projected_amplitude_matches_closed_form():
    """a1 for Lambda=-1, R=0.9 within 2% of (Lambda-R^2)/(3+R^2)."""
    from spinbath.states import z_up_down

    report = classify_spectrum(make_generator(0.05, 0.9))
    coeff = mode_coefficients(report, z_up_down())
    expected = (-1.0 - 0.81) / (3.0 + 0.81)
    assert coeff[1].real == pytest.approx(expected, rel=0.02)
    assert abs(coeff[1].imag) < 1e-9


def test_analytic_slow_eigenpair_values():
    rates = RateSet.from_parameters(1.0, BathThermal(0.0), 0.05)
    lam, pattern = analytic_slow_eigenpair(rates)
    assert lam == pytest.approx(-0.05)
    assert pattern.component(2, 2) == 1.0
    assert pattern.component(3, 3) == 1.0
    assert pattern.component(1, 1) == pytest.approx(2.0)  # 1 + R^2 at R=1
    zero = RateSet.from_parameters(1.0, BathThermal(0.5), 0.0)
    assert analytic_slow_eigenpair(zero)[0] == 0.0


def test_analytic_slow_eigenpair_warns_at_large_deficit():
    rates = RateSet.from_parameters(1.0, BathThermal(0.0), 0.5)
    with pytest.warns(UserWarning, match="first-order"):
        analytic_slow_eigenpair(rates)


# ---------------------------------------------------------------------------
# Field-dressing invariances
# ---------------------------------------------------------------------------


def _dressed_pair(deficit, ratio, strength):
    bare = make_generator(deficit, ratio)
    dressed = make_generator(
        deficit,
        ratio,
        lamb_a=0.0,
        lamb_b=strength,
        exchange_xi=strength,
        include_lamb=True,
        include_exchange=True,
    )
    return bare, dressed


def test_dressing_acts_trivially_on_thermal_and_slow_patterns():
    """The alpha_0 / alpha_1 operators commute with both corrections."""
    bare, dressed = _dressed_pair(0.05, 0.9, 8.0)
    for pattern in (thermal_alpha(0.9), slow_alpha_pattern(0.9)):
        difference = dressed.apply(pattern) - bare.apply(pattern)
        assert np.max(np.abs(difference)) < 1e-12


def test_dressing_leaves_slow_eigenvalue_unchanged():
    bare, dressed = _dressed_pair(0.05, 0.9, 8.58)
    lam_bare = classify_spectrum(bare).slow_eigenvalue
    lam_dressed = classify_spectrum(dressed).slow_eigenvalue
    assert lam_dressed == pytest.approx(lam_bare, rel=1e-9)


def test_dressing_shifts_oscillatory_frequency_not_width():
    """Re(lambda_2) drift is O(deficit^2); Im moves by order strength."""
    drifts = []
    for deficit in (0.01, 0.005):
        bare, dressed = _dressed_pair(deficit, 0.9, 1.0)
        osc_bare = classify_spectrum(bare).eigenvalues[2]
        osc_dressed = classify_spectrum(dressed).eigenvalues[2]
        assert abs(osc_dressed.imag - osc_bare.imag) > 0.5
        drifts.append(abs(osc_dressed.real - osc_bare.real))
    assert drifts[0] / drifts[1] == pytest.approx(4.0, rel=0.2)
    assert drifts[0] < 1e-4


# ---------------------------------------------------------------------------
# JSON export
# ---------------------------------------------------------------------------


def test_generator_json_round_trip(reference_generator):
    payload = json.loads(generator_to_json(reference_generator))
    entries = np.array(payload["entries_row_major"]).reshape(16, 16)
    assert np.max(np.abs(entries - reference_generator.entries)) < 1e-12
    assert payload["gamma0"] == 1.0
    assert payload["delta_field"] == DELTA_FIELD
    assert payload["include_lamb"] is False


def test_spectrum_json_contents(reference_spectrum):
    payload = json.loads(spectrum_to_json(reference_spectrum))
    assert len(payload["modes"]) == 16
    labels = [mode["label"] for mode in payload["modes"]]
    assert labels[:4] == ["thermal", "slow", "oscillatory", "oscillatory"]
    slow = payload["modes"][1]
    assert slow["re"] == pytest.approx(reference_spectrum.slow_eigenvalue)
    assert len(slow["right_re"]) == 16
    assert payload["fast_violations"] == []
