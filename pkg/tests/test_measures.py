import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gravres.errors import InvalidInputError, NumericalError
from gravres.gravity import PhaseSet, build_unitary, evolve
from gravres.measures import (
    Measure,
    MeasureValue,
    binary_entropy,
    concurrence,
    entanglement_entropy,
    l1_coherence,
    negativity,
    relative_entropy_coherence,
    von_neumann_entropy,
)
from gravres.states import ProductStateParams, build_product_state, partial_trace, pure_to_density

# frozen with mpmath at 30 digits
H2_THREE_QUARTERS = 0.811278124459132863909695792039
H2_COS_PI_4 = 0.60087603669285610084202704386


def evolved(total, split=0.5, pa=0.5, pb=0.5):
    rho0 = pure_to_density(build_product_state(ProductStateParams(pa, pb)))
    return evolve(rho0, build_unitary(PhaseSet.from_differences(split * total, (1 - split) * total)))


def reduced_uniform(c):
    return np.array([[0.5, 0.5 * c], [0.5 * c, 0.5]])


def test_l1_examples():
    assert l1_coherence(np.full((4, 4), 0.25)) == 3.0
    assert l1_coherence(np.diag([0.2, 0.8])) == 0.0
    for total in np.linspace(0, 4 * math.pi, 17):
        rho_a = partial_trace(evolved(total, 0.3), "A")
        assert l1_coherence(rho_a) == pytest.approx(abs(math.cos(total / 2)), abs=1e-12)


def test_von_neumann_examples():
    assert von_neumann_entropy(np.diag([1.0, 0, 0, 0])) == 0.0
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-15)
    assert von_neumann_entropy(reduced_uniform(0.5)) == pytest.approx(H2_THREE_QUARTERS, abs=1e-12)


def test_relative_entropy_examples():
    assert relative_entropy_coherence(np.diag([0.3, 0.7])) == 0.0
    assert relative_entropy_coherence(reduced_uniform(1.0)) == pytest.approx(1.0, abs=1e-12)
    assert relative_entropy_coherence(reduced_uniform(0.0)) == pytest.approx(0.0, abs=1e-12)
    for c in np.linspace(-1, 1, 21):
        expected = 1 - binary_entropy((1 + c) / 2)
        assert relative_entropy_coherence(reduced_uniform(c)) == pytest.approx(expected, abs=1e-10)


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.75) == pytest.approx(H2_THREE_QUARTERS, abs=1e-15)
    with pytest.raises(InvalidInputError):
        binary_entropy(1.5)


def test_negativity_examples():
    assert negativity(evolved(math.pi, 0.2)) == pytest.approx(1.0, abs=1e-12)
    for pa, pb in [(0.5, 0.5), (0.1, 0.9), (0.0, 0.3), (1.0, 1.0)]:
        assert negativity(pure_to_density(build_product_state(ProductStateParams(pa, pb)))) == 0.0
    rho = evolved(math.pi, 0.5, 0.25, 0.5)
    assert negativity(rho) == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert negativity(rho) == pytest.approx(oracles.negativity(rho.mat), abs=1e-12)


def test_concurrence_examples():
    assert concurrence(pure_to_density(build_product_state(ProductStateParams(0.3, 0.6)))) == pytest.approx(0, abs=1e-15)
    assert concurrence(evolved(math.pi)) == pytest.approx(1.0, abs=1e-12)
    for total in np.linspace(0, 2 * math.pi, 50):
        rho = evolved(total, 0.4)
        assert concurrence(rho) == pytest.approx(negativity(rho), abs=1e-9)


def test_concurrence_known_mixed_states():
    # Werner state p|Psi-><Psi-| + (1-p) I/4 has C = max(0, (3p - 1)/2)
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    for p in np.linspace(0, 1, 11):
        rho = p * np.outer(singlet, singlet) + (1 - p) * np.eye(4) / 4
        assert concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)
    assert concurrence(np.eye(4) / 4) == 0.0


def test_concurrence_against_oracles():
    rng = np.random.default_rng(21)
    for _ in range(30):
        psi = oracles.random_pure(rng)
        assert concurrence(np.outer(psi, psi.conj())) == pytest.approx(oracles.concurrence_pure(psi), abs=1e-12)
        rho = oracles.random_mixed(rng)
        assert concurrence(rho) == pytest.approx(oracles.concurrence(rho), abs=1e-8)


def test_negativity_not_above_concurrence():
    rng = np.random.default_rng(22)
    for _ in range(100):
        psi = oracles.random_pure(rng)
        rho = np.outer(psi, psi.conj())
        assert negativity(rho) <= concurrence(rho) + 1e-9
        rho = oracles.random_mixed(rng)
        assert negativity(rho) <= concurrence(rho) + 1e-9


def test_entanglement_entropy_examples():
    assert entanglement_entropy(pure_to_density(build_product_state(ProductStateParams(0.2, 0.7)))) == 0.0
    assert entanglement_entropy(evolved(math.pi)) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy(evolved(math.pi / 2)) == pytest.approx(H2_COS_PI_4, abs=1e-12)


def test_entanglement_entropy_rejects_mixed():
    with pytest.raises(InvalidInputError):
        entanglement_entropy(np.eye(4) / 4)


def test_entropy_rejects_clearly_negative_spectrum():
    # Hermitian, unit trace, eigenvalue -1e-6: rejected as a state by the spectral clip
    bad = np.diag([0.5 + 1e-6, 0.5, 0.0, -1e-6])
    with pytest.raises((InvalidInputError, NumericalError)):
        von_neumann_entropy(bad)


def test_subsystem_symmetry():
    for total in np.linspace(0, 2 * math.pi, 25):
        rho = evolved(total, 0.35)
        assert von_neumann_entropy(partial_trace(rho, "A")) == pytest.approx(
            von_neumann_entropy(partial_trace(rho, "B")), abs=1e-10
        )


def test_uniform_family_invariants():
    for total in np.linspace(-3 * math.pi, 3 * math.pi, 61):
        rho = evolved(total, 0.7)
        assert l1_coherence(rho) == pytest.approx(3.0, abs=1e-10)
        rho_a = partial_trace(rho, "A")
        # diagonal of rho_A is (1/2, 1/2), so C_r + S = 1
        assert relative_entropy_coherence(rho_a) + von_neumann_entropy(rho_a) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(0, 1), st.floats(0, 1))
def test_global_phase_gauge_invariance(phi, dl, dr, pa, pb):
    rho0 = pure_to_density(build_product_state(ProductStateParams(pa, pb)))
    gauged = evolve(rho0, build_unitary(PhaseSet.from_differences(dl, dr, phi=phi)))
    plain = evolve(rho0, build_unitary(PhaseSet.from_differences(dl, dr)))
    for f in (l1_coherence, von_neumann_entropy, negativity, concurrence, entanglement_entropy):
        assert f(gauged) == pytest.approx(f(plain), abs=1e-12)
    assert relative_entropy_coherence(partial_trace(gauged)) == pytest.approx(
        relative_entropy_coherence(partial_trace(plain)), abs=1e-12
    )


def test_measure_value_bounds():
    assert MeasureValue(Measure.L1_COHERENCE, 3.0, 4).within_bounds()
    assert not MeasureValue(Measure.L1_COHERENCE, 1.5, 2).within_bounds()
    assert MeasureValue(Measure.ENT_ENTROPY, 1.0).within_bounds()
    assert not MeasureValue(Measure.NEGATIVITY, -0.1).within_bounds()
