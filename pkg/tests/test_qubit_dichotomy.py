from __future__ import annotations

import math

import numpy as np
import pytest
from helpers import convex_hull, hull_excess, orthogonal_pair, random_dichotomy, random_state

from accinfo.binary_dist import mutual_information
from accinfo.qubit_dichotomy import (
    DegenerateError,
    Dichotomy,
    Effect,
    QubitState,
    StateError,
    helstrom_matrix,
    induced_joint,
    lambda_helstrom,
    lambda_star,
    lorenz_boundary,
    lorenz_curve,
    mu,
    omega,
    omega_purity,
    outcome_probs_array,
    povm_from_lambda,
)

I2 = np.eye(2)


def tr(m) -> float:
    return float(np.real(np.trace(m)))


# -- states ---------------------------------------------------------------------------


def test_state_validation():
    with pytest.raises(StateError):
        QubitState((0.8, 0.8, 0.0))
    with pytest.raises(StateError):
        QubitState((0.1, 0.2))
    with pytest.raises(StateError):
        QubitState((math.inf, 0.0, 0.0))
    # norm a hair above one is projected back onto the sphere
    s = QubitState((0.0, 0.0, 1.0 + 1e-13))
    assert s.bloch == (0.0, 0.0, 1.0)


def test_matrix_round_trip(rng):
    for _ in range(100):
        s = random_state(rng)
        m = s.matrix
        assert tr(m) == pytest.approx(1.0, abs=1e-15)
        assert np.max(np.abs(m - m.conj().T)) == 0.0
        assert np.min(np.linalg.eigvalsh(m)) >= -1e-12
        back = QubitState.from_matrix(m)
        np.testing.assert_allclose(back.bloch, s.bloch, atol=1e-15)
        assert s.purity == pytest.approx(tr(m @ m), abs=1e-14)


def test_from_matrix_hermitises_and_rejects():
    m = np.array([[0.7, 0.2 + 0.1j + 1e-12], [0.2 - 0.1j, 0.3]])
    s = QubitState.from_matrix(m)
    np.testing.assert_allclose(s.bloch, (0.4, -0.2, 0.4), atol=1e-11)
    with pytest.raises(StateError):
        QubitState.from_matrix([[0.7, 0.3], [0.0, 0.3]])
    with pytest.raises(StateError):
        QubitState.from_matrix([[0.7, 0.0], [0.0, 0.4]])
    with pytest.raises(StateError):
        QubitState.from_matrix([[1.2, 0.0], [0.0, -0.2]])


def test_dichotomy_validation():
    r = QubitState((0.1, 0.2, 0.3))
    with pytest.raises(StateError):
        Dichotomy(r, r)
    with pytest.raises(StateError):
        Dichotomy(r, QubitState((0.1, 0.2, 0.3 + 1e-7)))
    with pytest.raises(StateError):
        Dichotomy(r, QubitState((0.0, 0.0, 0.0)), (0.7, 0.4))
    with pytest.raises(StateError):
        Dichotomy(r, QubitState((0.0, 0.0, 0.0)), (1.2, -0.2))


# -- mu, omega, purity ------------------------------------------------------------------


def test_mu_examples(rng):
    assert mu(orthogonal_pair()) == pytest.approx(0.5, abs=1e-15)
    d = Dichotomy(QubitState.pure(0.7, 1.1), QubitState((0.0, 0.0, 0.0)))
    assert mu(d) == pytest.approx(0.0, abs=1e-15)
    for _ in range(100):
        d = random_dichotomy(rng)
        assert mu(d.swapped()) == pytest.approx(1.0 - mu(d), abs=1e-9)


def test_omega_orthogonal_pair():
    np.testing.assert_allclose(omega(orthogonal_pair()).matrix, I2 / 2, atol=1e-15)
    assert omega_purity(orthogonal_pair()) == pytest.approx(0.5, abs=1e-15)


def test_omega_against_matrix_oracle(rng):
    for _ in range(300):
        d = random_dichotomy(rng)
        rho, sigma = d.rho.matrix, d.sigma.matrix
        delta = rho - sigma
        m = (tr(sigma @ sigma) - tr(rho @ sigma)) / tr(delta @ delta)
        w = m * rho + (1.0 - m) * sigma
        assert mu(d) == pytest.approx(m, abs=1e-10)
        np.testing.assert_allclose(omega(d).matrix, w, atol=1e-10)
        assert abs(tr(omega(d).matrix @ delta)) < 1e-12
        assert omega_purity(d) == pytest.approx(tr(w @ w), abs=1e-12)
        assert omega_purity(d) == pytest.approx(omega(d).purity, abs=1e-12)
        assert 0.5 - 1e-15 <= omega_purity(d) < 1.0


def test_omega_purity_below_one_as_states_merge():
    r = np.array([0.0, 0.0, 1.0])
    for eps in 10.0 ** -np.arange(1, 6):
        s = np.array([math.sin(eps), 0.0, math.cos(eps)])
        d = Dichotomy.from_bloch(r, s)
        assert omega_purity(d) < 1.0
    for eps in 10.0 ** -np.arange(1, 6):
        d = Dichotomy.from_bloch((0.0, 0.0, 0.6), (eps, 0.0, 0.6))
        assert omega_purity(d) < 1.0


# -- Helstrom family ----------------------------------------------------------------------


def test_helstrom_matrix_identities(rng):
    for _ in range(300):
        d = random_dichotomy(rng)
        lam = float(rng.normal(scale=3.0))
        H = helstrom_matrix(d, lam)
        direct = lam * omega(d).matrix - (d.rho.matrix - d.sigma.matrix)
        np.testing.assert_allclose(H.matrix, direct, atol=1e-12)
        assert H.trace == pytest.approx(lam, abs=1e-12)
        delta = d.rho.matrix - d.sigma.matrix
        assert tr(H.matrix @ H.matrix) == pytest.approx(lam**2 * omega_purity(d) + tr(delta @ delta), abs=1e-11)
        assert helstrom_matrix(d, 3.7).trace == pytest.approx(3.7, abs=1e-12)


def test_helstrom_at_zero_is_minus_difference(rng):
    d = random_dichotomy(rng)
    H = helstrom_matrix(d, 0.0)
    np.testing.assert_allclose(H.matrix, d.sigma.matrix - d.rho.matrix, atol=1e-15)
    assert H.trace == 0.0


def test_lambda_star_orthogonal_pair():
    assert lambda_star(orthogonal_pair()) == pytest.approx(2.0, abs=1e-15)


def test_det_vanishes_at_window_edges(rng):
    for _ in range(300):
        d = random_dichotomy(rng)
        ls = lambda_star(d)
        assert ls > 0.0 and math.isfinite(ls)
        for lam in (ls, -ls):
            assert abs(np.linalg.det(helstrom_matrix(d, lam).matrix)) < 1e-10


def test_lambda_star_vanishes_as_mixed_states_merge():
    prev = math.inf
    for eps in 10.0 ** -np.arange(1, 6):
        d = Dichotomy.from_bloch((0.0, 0.0, 0.5), (0.5 * math.sin(eps), 0.0, 0.5 * math.cos(eps)))
        ls = lambda_star(d)
        assert 0.0 < ls < prev
        prev = ls
    assert prev < 1e-4


def test_window_sign_structure(rng):
    for _ in range(200):
        d = random_dichotomy(rng)
        ls = lambda_star(d)
        inside = float(rng.uniform(-0.999, 0.999)) * ls
        ev = np.linalg.eigvalsh(helstrom_matrix(d, inside).matrix)
        assert ev[0] < 0.0 < ev[1]
        for outside in (ls * 1.001 + 1e-6, ls + float(rng.exponential(5.0)) + 1e-3):
            for sign in (1.0, -1.0):
                ev = np.linalg.eigvalsh(helstrom_matrix(d, sign * outside).matrix)
                assert np.all(np.sign(ev) == sign)
                plus, _ = povm_from_lambda(d, sign * outside)
                assert plus == (Effect.identity() if sign > 0 else Effect.zero())
                assert mutual_information(induced_joint(d, sign * outside)) == 0.0


def test_lambda_helstrom_uniform_prior(rng):
    for _ in range(20):
        assert lambda_helstrom(Dichotomy(random_state(rng), random_state(rng))) == 0.0


def test_lambda_helstrom_matches_helstrom_direction(rng):
    for _ in range(300):
        d = random_dichotomy(rng)
        p0, p1 = d.prior
        lh = lambda_helstrom(d)
        vec = np.array(helstrom_matrix(d, lh).vec)
        target = (p0 * d.rho.vector - p1 * d.sigma.vector) / 2.0
        assert np.linalg.norm(np.cross(vec, target)) < 1e-10
        # the whole operator, trace included, is a multiple of p0 rho - p1 sigma
        denom = p0 * (1.0 - mu(d)) + p1 * mu(d)
        np.testing.assert_allclose(
            helstrom_matrix(d, lh).matrix, -(p0 * d.rho.matrix - p1 * d.sigma.matrix) / denom, atol=1e-9
        )


def test_lambda_helstrom_degenerate():
    # collinear states with mu = 2, and p0 = 2/3 zeroes the denominator
    d = Dichotomy.from_bloch((0.0, 0.0, 0.3), (0.0, 0.0, 0.6), 2.0 / 3.0)
    assert mu(d) == pytest.approx(2.0)
    with pytest.raises(DegenerateError):
        lambda_helstrom(d)


# -- measurements ---------------------------------------------------------------------------


def test_povm_orthogonal_pair_at_zero():
    plus, minus = povm_from_lambda(orthogonal_pair(), 0.0)
    np.testing.assert_allclose(plus.matrix, [[0, 0], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(minus.matrix, [[1, 0], [0, 0]], atol=1e-15)


def test_povm_projector_algebra_and_spectral_oracle(rng):
    for _ in range(300):
        d = random_dichotomy(rng)
        lam = float(rng.uniform(-1.0, 1.0)) * lambda_star(d)
        plus, minus = povm_from_lambda(d, lam)
        P, M = plus.matrix, minus.matrix
        np.testing.assert_allclose(P + M, I2, atol=1e-15)
        np.testing.assert_allclose(P @ M, 0.0, atol=1e-12)
        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        ev, vecs = np.linalg.eigh(helstrom_matrix(d, lam).matrix)
        top = vecs[:, 1:2]
        np.testing.assert_allclose(P, top @ top.conj().T, atol=1e-9)


def test_tie_rule_at_window_edges(rng):
    for _ in range(100):
        d = random_dichotomy(rng)
        ls = lambda_star(d)
        plus, _ = povm_from_lambda(d, -ls)
        H = helstrom_matrix(d, -ls).matrix
        assert abs(plus.scalar - 0.5) < 1e-15
        np.testing.assert_allclose(H @ plus.matrix, 0.0, atol=1e-10)
        plus, _ = povm_from_lambda(d, ls)
        assert plus == Effect.identity()


def test_effect_validation():
    with pytest.raises(StateError):
        Effect(0.5, (0.6, 0.0, 0.0))
    e = Effect.from_matrix([[0.3, 0.1j], [-0.1j, 0.6]])
    np.testing.assert_allclose(e.matrix, [[0.3, 0.1j], [-0.1j, 0.6]], atol=1e-15)
    np.testing.assert_allclose(e.complement().matrix, I2 - e.matrix, atol=1e-15)


def test_induced_joint_examples(rng):
    p = induced_joint(orthogonal_pair(), 0.0)
    np.testing.assert_allclose(p.matrix, [[0.0, 0.5], [0.5, 0.0]], atol=1e-15)
    assert mutual_information(p) == pytest.approx(1.0, abs=1e-15)
    near = Dichotomy.from_bloch((0.0, 0.0, 0.5), (1e-4, 0.0, 0.5))
    assert mutual_information(induced_joint(near, 0.0)) < 1e-6
    for _ in range(100):
        d = random_dichotomy(rng)
        p = induced_joint(d, float(rng.uniform(-1.5, 1.5)) * lambda_star(d))
        assert p.marginal_x.p0 == pytest.approx(d.prior[0], abs=1e-12)


def test_label_covariance(rng):
    # relabelling maps H(lam) to -H(-lam), so both outcome columns swap as well
    for _ in range(200):
        d = random_dichotomy(rng)
        lam = float(rng.uniform(-0.99, 0.99)) * lambda_star(d)
        p = induced_joint(d, lam)
        q = induced_joint(d.swapped(), -lam)
        np.testing.assert_allclose(q.matrix, p.swap_rows().swap_columns().matrix, atol=1e-12)
        assert mutual_information(q) == pytest.approx(mutual_information(p), abs=1e-12)


def test_vectorised_outcomes_agree(rng):
    for _ in range(30):
        d = random_dichotomy(rng)
        ls = lambda_star(d)
        lams = np.concatenate([np.linspace(-1.2 * ls, 1.2 * ls, 41), [-ls, ls]])
        q_r, q_s = outcome_probs_array(d, lams)
        for lam, a, b in zip(lams, q_r, q_s):
            plus, _ = povm_from_lambda(d, float(lam))
            assert a == pytest.approx(plus.prob(d.rho), abs=1e-13)
            assert b == pytest.approx(plus.prob(d.sigma), abs=1e-13)


# -- Lorenz curve ------------------------------------------------------------------------------


def test_lorenz_basic():
    pts = lorenz_curve(orthogonal_pair(), 3)
    assert [p.lam for p in pts] == [-2.0, 0.0, 2.0]
    assert (pts[1].q_rho, pts[1].q_sigma) == (0.0, 1.0)
    boundary = lorenz_boundary(orthogonal_pair(), 3)
    assert any((p.q_rho, p.q_sigma) == (1.0, 0.0) for p in boundary)
    assert len(lorenz_curve(orthogonal_pair(), 2)) == 2
    with pytest.raises(ValueError):
        lorenz_curve(orthogonal_pair(), 1)


def test_lorenz_points_in_unit_square(rng):
    for _ in range(20):
        for p in lorenz_boundary(random_dichotomy(rng), 101):
            assert 0.0 <= p.q_rho <= 1.0 and 0.0 <= p.q_sigma <= 1.0


def test_helstrom_point_maximises_weighted_gap(rng):
    for _ in range(50):
        d = random_dichotomy(rng)
        p0, p1 = d.prior
        pts = np.array([(p.q_rho, p.q_sigma) for p in lorenz_boundary(d, 2001)])
        sampled = np.max(p0 * pts[:, 0] - p1 * pts[:, 1])
        plus, minus = povm_from_lambda(d, lambda_helstrom(d))
        at_h = max(p0 * e.prob(d.rho) - p1 * e.prob(d.sigma) for e in (plus, minus))
        # Helstrom's closed form: (p0 - p1 + ||p0 rho - p1 sigma||_1) / 2
        ev = np.linalg.eigvalsh(p0 * d.rho.matrix - p1 * d.sigma.matrix)
        closed = (p0 - p1 + np.sum(np.abs(ev))) / 2.0
        assert at_h == pytest.approx(closed, abs=1e-12)
        assert sampled <= at_h + 1e-12
        assert sampled >= at_h - 1e-5


def random_effect_points(rng, d: Dichotomy, n: int) -> np.ndarray:
    c = rng.uniform(0.0, 1.0, n)
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= (np.minimum(c, 1.0 - c) * rng.uniform(0.0, 1.0, n) ** 0.25)[:, None]
    return np.stack([c + v @ d.rho.vector, c + v @ d.sigma.vector], axis=1)


def test_random_effects_stay_inside_lorenz_hull(rng):
    for _ in range(5):
        d = random_dichotomy(rng)
        pts = np.array([(p.q_rho, p.q_sigma) for p in lorenz_boundary(d, 4001)] + [(0.0, 0.0), (1.0, 1.0)])
        q = random_effect_points(rng, d, 10_000)
        assert np.max(hull_excess(convex_hull(pts), q)) <= 1e-6
