import numpy as np
import pytest

from imaginarity.channels import (
    apply,
    check_cptp,
    choi_from_kraus,
    identity_channel,
    is_completely_rng,
    is_free_unitary,
    sample_real_choi_channel,
)
from imaginarity.core import DimensionError, NotCPTPError
from imaginarity.measures import measure_m
from imaginarity.states import (
    bloch_of_qubit,
    maximally_imaginary,
    projector,
    random_pure_state,
    theta_state,
)
from imaginarity.transforms import (
    AffineMap,
    NotConvertibleError,
    _qubit_kraus_params,
    affine_of_qubit_channel,
    bloch_affine_to_choi,
    compression_kraus,
    embedding_kraus,
    fidelity,
    qubit_transform_affine,
    synthesize,
    synthesize_to_mixed,
    theorem5_affine,
    transform_exists,
)

PLUS = np.array([1, 1]) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)
PLUS_I = np.array([1, 1j]) / np.sqrt(2)
MINUS_I = np.array([1, -1j]) / np.sqrt(2)
PSI3 = np.array([1, 1j, 1j]) / np.sqrt(3)


def test_transform_exists_examples(rng):
    for _ in range(20):
        assert transform_exists(PLUS_I, random_pure_state(3, rng))
    assert not transform_exists(PLUS, PLUS_I)
    psi = random_pure_state(4, rng)
    assert transform_exists(psi, psi)


def test_naive_affine_examples():
    am = theorem5_affine(np.pi / 2, np.pi / 2)
    assert np.allclose(am.t_mat, np.diag([1, 1, 0])) and np.allclose(am.t_vec, 0)
    am = theorem5_affine(np.pi / 2, 0.0)
    assert np.allclose(am.t_mat, np.diag([1, 0, 0])) and np.allclose(am.t_vec, [1, 0, 0])
    am = theorem5_affine(0.0, 0.0)
    assert np.array_equal(am.t_mat, np.diag([1.0, 0.0, 0.0])) and np.array_equal(am.t_vec, np.zeros(3))
    with pytest.raises(ValueError):
        theorem5_affine(0.3, 0.5)


def test_naive_affine_moves_bloch_vector_but_is_not_cp():
    # the pole (1, 0, 0) is sent to (1 + cos th' - cos th, 0, 0), outside the ball
    for theta, theta_p in [(np.pi / 2, 0.0), (1.0, 0.4), (0.8, 0.8)]:
        am = theorem5_affine(theta, theta_p)
        src = bloch_of_qubit(projector(theta_state(theta)))
        dst = bloch_of_qubit(projector(theta_state(theta_p)))
        assert np.allclose(am(src), dst, atol=1e-12)
        with pytest.raises(NotCPTPError):
            bloch_affine_to_choi(am)


def test_bloch_affine_to_choi_examples():
    ch = bloch_affine_to_choi(AffineMap(np.eye(3), np.zeros(3)))
    assert np.allclose(ch.choi, identity_channel(2).choi, atol=1e-15)
    ch = bloch_affine_to_choi(AffineMap(np.zeros((3, 3)), np.zeros(3)))
    assert np.allclose(ch.choi, np.eye(4) / 2, atol=1e-15)


def test_affine_roundtrip(rng):
    for seed in range(10):
        ch = sample_real_choi_channel(2, seed)
        am = affine_of_qubit_channel(ch)
        assert np.allclose(bloch_affine_to_choi(am).choi, ch.choi, atol=1e-12)
        rho = projector(random_pure_state(2, rng))
        assert np.allclose(am(bloch_of_qubit(rho)), bloch_of_qubit(apply(ch, rho)), atol=1e-12)


@pytest.mark.parametrize("theta,theta_p", [(np.pi / 2, 0.0), (np.pi / 2, np.pi / 4), (1.0, 0.3), (0.4, 0.399), (0.7, 0.7)])
def test_qubit_transform_affine(theta, theta_p):
    am = qubit_transform_affine(theta, theta_p)
    src = bloch_of_qubit(projector(theta_state(theta)))
    dst = bloch_of_qubit(projector(theta_state(theta_p)))
    assert np.allclose(am(src), dst, atol=1e-12)
    ch = bloch_affine_to_choi(am)
    assert is_completely_rng(ch)
    assert fidelity(ch, theta_state(theta), theta_state(theta_p)) >= 1 - 1e-12


def test_qubit_transform_matches_kraus_construction():
    basis = np.array([[1, -1], [1, 1]]) / np.sqrt(2)  # columns |+>, (|1> - |0>)/sqrt 2
    for theta, theta_p in [(np.pi / 2, 0.2), (1.1, 0.6)]:
        p, q, mu, nu = _qubit_kraus_params(theta, theta_p)
        ks = [basis @ np.diag([p, q]) @ basis.T, basis @ np.array([[0, mu], [nu, 0]]) @ basis.T]
        from_kraus = choi_from_kraus(ks)
        from_affine = bloch_affine_to_choi(qubit_transform_affine(theta, theta_p))
        assert np.allclose(from_kraus.choi, from_affine.choi, atol=1e-12)


def test_qubit_transform_domain():
    with pytest.raises(ValueError):
        qubit_transform_affine(0.2, 0.5)
    with pytest.raises(ValueError):
        qubit_transform_affine(2.0, 0.5)


def test_compression_and_embedding_are_free():
    for d in (2, 3, 5):
        for ks in (compression_kraus(d), embedding_kraus(d)):
            assert all(np.isrealobj(k) for k in ks)
        check_cptp(choi_from_kraus(compression_kraus(d)).choi, 2, d)
        check_cptp(choi_from_kraus(embedding_kraus(d)).choi, d, 2)


def test_synthesize_examples():
    plan = synthesize(PLUS_I, PLUS)
    assert plan.theta == pytest.approx(np.pi / 2) and plan.theta_prime == pytest.approx(0.0, abs=1e-12)
    assert fidelity(plan.total, PLUS_I, PLUS) >= 1 - 1e-9
    target = theta_state(0.5, 3)
    plan = synthesize(PSI3, target)
    assert plan.theta == pytest.approx(1.2309594173407747, abs=1e-10)
    assert plan.theta_prime == pytest.approx(0.5, abs=1e-10)
    assert fidelity(plan.total, PSI3, target) >= 1 - 1e-9
    with pytest.raises(NotConvertibleError):
        synthesize(PLUS, PLUS_I)


def test_synthesize_identity_on_source(rng):
    for d in (2, 3, 4):
        psi = random_pure_state(d, rng)
        plan = synthesize(psi, psi)
        assert plan.theta == plan.theta_prime
        assert fidelity(plan.total, psi, psi) >= 1 - 1e-9


def _stage_checks(plan):
    assert is_free_unitary(plan.u_pre) is not None
    assert is_free_unitary(plan.u_post) is not None
    assert all(np.isrealobj(k) for k in plan.compress + plan.embed)
    assert is_completely_rng(plan.qubit_choi)
    assert is_completely_rng(plan.total)
    check_cptp(plan.total.choi, plan.total.dim_out, plan.total.dim_in)


def test_soundness_and_stage_freeness(rng):
    done = 0
    while done < 60:
        d = 2 + done % 3
        psi, phi = random_pure_state(d, rng), random_pure_state(d, rng)
        if not transform_exists(psi, phi):
            psi, phi = phi, psi
        plan = synthesize(psi, phi)
        _stage_checks(plan)
        assert fidelity(plan.total, psi, phi) >= 1 - 1e-9
        done += 1


@pytest.mark.parametrize("d_in,d_out", [(3, 2), (2, 4), (4, 3)])
def test_cross_dimension(rng, d_in, d_out):
    psi = maximally_imaginary(d_in)
    phi = random_pure_state(d_out, rng)
    plan = synthesize(psi, phi)
    assert (plan.total.dim_out, plan.total.dim_in) == (d_out, d_in)
    _stage_checks(plan)
    assert fidelity(plan.total, psi, phi) >= 1 - 1e-9


def test_necessity_spot_check(rng):
    psi = theta_state(0.3)
    phi = theta_state(1.2)
    assert measure_m(projector(psi)).value < measure_m(projector(phi)).value
    assert not transform_exists(psi, phi)
    best = max(fidelity(sample_real_choi_channel(2, seed), psi, phi) for seed in range(1000))
    assert best < 1 - 1e-6


def test_maximally_imaginary_reaches_everything(rng):
    for d in (2, 3, 4):
        for _ in range(10):
            phi = random_pure_state(d, rng)
            assert transform_exists(maximally_imaginary(d), phi)
            assert fidelity(synthesize(maximally_imaginary(d), phi).total, maximally_imaginary(d), phi) >= 1 - 1e-9


def test_minus_i_equivalence():
    assert fidelity(synthesize(MINUS_I, PLUS_I).total, MINUS_I, PLUS_I) >= 1 - 1e-9
    assert fidelity(synthesize(PLUS_I, MINUS_I).total, PLUS_I, MINUS_I) >= 1 - 1e-9


def test_synthesize_to_mixed_examples():
    ch = synthesize_to_mixed(PLUS_I, [(0.5, PLUS), (0.5, MINUS)])
    assert np.allclose(ch(projector(PLUS_I)), np.eye(2) / 2, atol=1e-8)
    ens = [(0.5, theta_state(np.pi / 4)), (0.5, np.array([1.0, 0.0]))]
    target = sum(p * projector(phi) for p, phi in ens)
    ch = synthesize_to_mixed(PLUS_I, ens)
    assert np.max(np.abs(ch(projector(PLUS_I)) - target)) <= 1e-8
    assert is_completely_rng(ch)
    single = synthesize_to_mixed(PLUS_I, [(1.0, PLUS)])
    assert np.allclose(single.choi, synthesize(PLUS_I, PLUS).total.choi)


def test_synthesize_to_mixed_errors():
    with pytest.raises(ValueError):
        synthesize_to_mixed(PLUS_I, [(0.5, PLUS), (0.4, MINUS)])
    with pytest.raises(NotConvertibleError):
        synthesize_to_mixed(PLUS, [(0.5, PLUS_I), (0.5, PLUS)])
    with pytest.raises(DimensionError):
        synthesize_to_mixed(PLUS_I, [(0.5, PLUS), (0.5, np.array([1.0, 0, 0]))])
