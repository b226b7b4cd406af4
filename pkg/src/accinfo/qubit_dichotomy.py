"""Qubit dichotomies and the one-parameter family of Helstrom-type matrices.

States are stored as Bloch vectors ``r`` with ``rho = (1 + r.sigma) / 2``.
For a dichotomy ``(rho, sigma)`` every Hermitian combination that is
indefinite is, up to a positive factor, one of

    H(lam) = lam * omega - (rho - sigma),

where ``omega = mu rho + (1 - mu) sigma`` is the affine combination
Hilbert-Schmidt orthogonal to ``rho - sigma``.  The projectors onto the
non-negative and negative parts of ``H(lam)`` are the two-outcome
measurements whose statistics lie on the Lorenz curve; only
``|lam| <= lambda_star`` gives a non-trivial measurement.

Conventions
-----------
* Outcome ``y = 0`` is the projector onto the non-negative part.
* A zero eigenvalue (at ``lam = +-lambda_star``) joins the non-negative
  part.  At ``+lambda_star`` this makes the first effect the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .binary_dist import JointDist

STATE_TOL = 1e-12
HERMITIAN_TOL = 1e-10
DISTINCT_TOL = 1e-12
EIGEN_TIE_TOL = 1e-12

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
IDENTITY = np.eye(2, dtype=complex)


class StateError(ValueError):
    """Invalid state, prior or dichotomy."""


class DegenerateError(ValueError):
    """A quantity is undefined for this input (zero denominator, flat spectrum)."""


def _dot(u: Sequence[float], v: Sequence[float]) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _bloch_matrix(scalar: float, vec: Sequence[float]) -> np.ndarray:
    x, y, z = vec
    return np.array(
        [[scalar + z, complex(x, -y)], [complex(x, y), scalar - z]], dtype=complex
    )


@dataclass(frozen=True)
class QubitState:
    """A qubit density matrix held as its Bloch vector."""

    bloch: tuple[float, float, float]

    def __post_init__(self) -> None:
        r = tuple(float(v) for v in self.bloch)
        if len(r) != 3 or not all(math.isfinite(v) for v in r):
            raise StateError(f"Bloch vector must be 3 finite reals, got {self.bloch!r}")
        norm = math.sqrt(_dot(r, r))
        if norm > 1.0 + STATE_TOL:
            raise StateError(f"Bloch vector norm {norm!r} exceeds 1")
        if norm > 1.0:
            r = tuple(v / norm for v in r)
        object.__setattr__(self, "bloch", r)

    @classmethod
    def from_matrix(cls, m) -> QubitState:
        """Validate a 2x2 density matrix and convert it to Bloch form.

        The matrix is Hermitised by averaging with its adjoint when it is
        Hermitian to within ``HERMITIAN_TOL``.
        """
        arr = np.asarray(m, dtype=complex)
        if arr.shape != (2, 2):
            raise StateError(f"expected a 2x2 matrix, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
            raise StateError("matrix is not Hermitian")
        arr = (arr + arr.conj().T) / 2
        tr = float(np.real(np.trace(arr)))
        if abs(tr - 1.0) > HERMITIAN_TOL:
            raise StateError(f"trace {tr!r} is not 1")
        if float(np.min(np.linalg.eigvalsh(arr))) < -STATE_TOL:
            raise StateError("matrix has a negative eigenvalue")
        arr = arr / tr
        x = 2.0 * float(arr[0, 1].real)
        y = -2.0 * float(arr[0, 1].imag)
        z = float((arr[0, 0] - arr[1, 1]).real)
        return cls((x, y, z))

    @classmethod
    def pure(cls, theta: float, phi: float = 0.0) -> QubitState:
        """The pure state at polar angle ``theta`` and azimuth ``phi``."""
        return cls(
            (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
        )

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.bloch)

    @property
    def matrix(self) -> np.ndarray:
        return _bloch_matrix(0.5, [v / 2 for v in self.bloch])

    @property
    def purity(self) -> float:
        return (1.0 + _dot(self.bloch, self.bloch)) / 2.0

    def overlap(self, other: QubitState) -> float:
        """Hilbert-Schmidt inner product Tr[rho sigma]."""
        return (1.0 + _dot(self.bloch, other.bloch)) / 2.0

    def to_complex_pairs(self) -> list[list[float]]:
        """Row-major ``[re, im]`` pairs of the matrix form."""
        return [[float(z.real), float(z.imag)] for z in self.matrix.ravel()]


@dataclass(frozen=True)
class Dichotomy:
    """Two distinct qubit states with a prior ``(p0, p1)``."""

    rho: QubitState
    sigma: QubitState
    prior: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self) -> None:
        p0, p1 = (float(v) for v in self.prior)
        if min(p0, p1) < -STATE_TOL or abs(p0 + p1 - 1.0) > STATE_TOL:
            raise StateError(f"invalid prior ({p0!r}, {p1!r})")
        p0, p1 = max(p0, 0.0), max(p1, 0.0)
        object.__setattr__(self, "prior", (p0 / (p0 + p1), p1 / (p0 + p1)))
        if self.distance2 <= DISTINCT_TOL:
            raise StateError(
                f"states coincide: Tr(rho - sigma)^2 = {self.distance2!r}"
            )

    @classmethod
    def from_bloch(cls, r, s, p0: float = 0.5) -> Dichotomy:
        return cls(QubitState(tuple(r)), QubitState(tuple(s)), (p0, 1.0 - p0))

    @property
    def distance2(self) -> float:
        """Tr(rho - sigma)^2 = |r - s|^2 / 2."""
        d = [u - v for u, v in zip(self.rho.bloch, self.sigma.bloch)]
        return _dot(d, d) / 2.0

    @property
    def difference(self) -> tuple[float, float, float]:
        return tuple(u - v for u, v in zip(self.rho.bloch, self.sigma.bloch))

    def swapped(self) -> Dichotomy:
        """The relabelled dichotomy ``(sigma, rho)`` with prior ``(p1, p0)``."""
        return Dichotomy(self.sigma, self.rho, (self.prior[1], self.prior[0]))


def mu(d: Dichotomy) -> float:
    """Coefficient of ``rho`` in the combination orthogonal to ``rho - sigma``."""
    return (d.sigma.purity - d.rho.overlap(d.sigma)) / d.distance2


def omega(d: Dichotomy) -> QubitState:
    m = mu(d)
    return QubitState(
        tuple(m * u + (1.0 - m) * v for u, v in zip(d.rho.bloch, d.sigma.bloch))
    )


def _cross(u: Sequence[float], v: Sequence[float]) -> tuple[float, float, float]:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def omega_purity(d: Dichotomy) -> float:
    """``(Tr rho^2 Tr sigma^2 - (Tr rho sigma)^2) / Tr(rho - sigma)^2``.

    In Bloch variables the numerator is ``(|r - s|^2 + |r x s|^2) / 4``, so
    the purity is evaluated as ``1/2 + |r x s|^2 / (2 |r - s|^2)``, which
    avoids cancellation for nearly equal pure states.
    """
    c = _cross(d.rho.bloch, d.sigma.bloch)
    delta = 2.0 * d.distance2
    return 0.5 + _dot(c, c) / (2.0 * delta)


def lambda_star(d: Dichotomy) -> float:
    """Half-width of the window of non-trivial ``lam``.

    ``H(lam)`` is indefinite exactly for ``|lam| < lambda_star``.  With
    ``delta = |r - s|^2`` and ``u, v`` the Bloch deficits ``1 - |r|^2``,
    ``1 - |s|^2``, the closed form
    ``Tr(rho - sigma)^2 / sqrt(Tr(rho - sigma)^2 - Tr rho^2 Tr sigma^2 + (Tr rho sigma)^2)``
    equals ``2 delta / sqrt(delta^2 + 2 delta (u + v) + (u - v)^2)``, a sum
    of non-negative terms under the root.
    """
    delta = 2.0 * d.distance2
    u = 1.0 - _dot(d.rho.bloch, d.rho.bloch)
    v = 1.0 - _dot(d.sigma.bloch, d.sigma.bloch)
    denom = delta * delta + 2.0 * delta * (u + v) + (u - v) ** 2
    if denom <= 0.0:
        raise DegenerateError(f"non-positive window denominator {denom!r}")
    return 2.0 * delta / math.sqrt(denom)


def lambda_helstrom(d: Dichotomy) -> float:
    """The ``lam`` whose eigenprojectors match those of ``p0 rho - p1 sigma``."""
    p0, p1 = d.prior
    m = mu(d)
    denom = p0 - m * p0 + p1 * m
    if abs(denom) < 1e-12:
        raise DegenerateError(f"Helstrom parameter denominator {denom!r} vanishes")
    return (p1 - p0) / denom


@dataclass(frozen=True, eq=False)
class HelstromMatrix:
    """``H(lam) = lam * omega - (rho - sigma)`` with its Bloch decomposition.

    ``H = scalar * 1 + vec . sigma``; for this family ``scalar = lam / 2``.
    """

    lam: float
    scalar: float
    vec: tuple[float, float, float]

    @property
    def matrix(self) -> np.ndarray:
        return _bloch_matrix(self.scalar, self.vec)

    @property
    def trace(self) -> float:
        return 2.0 * self.scalar

    @property
    def vec_norm(self) -> float:
        return math.sqrt(_dot(self.vec, self.vec))

    @property
    def eigenvalues(self) -> tuple[float, float]:
        """(larger, smaller)."""
        n = self.vec_norm
        return self.scalar + n, self.scalar - n

    @property
    def det(self) -> float:
        return self.scalar * self.scalar - _dot(self.vec, self.vec)


def helstrom_matrix(d: Dichotomy, lam: float) -> HelstromMatrix:
    if not math.isfinite(lam):
        raise ValueError(f"lam={lam!r} must be finite")
    w = omega(d).bloch
    diff = d.difference
    vec = tuple((lam * wi - di) / 2.0 for wi, di in zip(w, diff))
    return HelstromMatrix(lam, lam / 2.0, vec)


@dataclass(frozen=True)
class Effect:
    """A two-outcome measurement element ``E = scalar * 1 + vec . sigma``."""

    scalar: float
    vec: tuple[float, float, float]

    def __post_init__(self) -> None:
        n = math.sqrt(_dot(self.vec, self.vec))
        lo, hi = self.scalar - n, self.scalar + n
        if lo < -STATE_TOL or hi > 1.0 + STATE_TOL:
            raise StateError(f"effect eigenvalues ({lo!r}, {hi!r}) outside [0, 1]")

    @classmethod
    def identity(cls) -> Effect:
        return cls(1.0, (0.0, 0.0, 0.0))

    @classmethod
    def zero(cls) -> Effect:
        return cls(0.0, (0.0, 0.0, 0.0))

    @classmethod
    def projector(cls, direction: Sequence[float]) -> Effect:
        """Rank-one projector onto the Bloch direction ``direction`` (normalised here)."""
        n = math.sqrt(_dot(direction, direction))
        return cls(0.5, tuple(v / (2.0 * n) for v in direction))

    @classmethod
    def from_matrix(cls, m) -> Effect:
        arr = np.asarray(m, dtype=complex)
        if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
            raise StateError("effect is not Hermitian")
        arr = (arr + arr.conj().T) / 2
        return cls(
            float(np.real(np.trace(arr))) / 2.0,
            (float(arr[0, 1].real), -float(arr[0, 1].imag), float((arr[0, 0] - arr[1, 1]).real) / 2.0),
        )

    @property
    def matrix(self) -> np.ndarray:
        return _bloch_matrix(self.scalar, self.vec)

    def complement(self) -> Effect:
        return Effect(1.0 - self.scalar, tuple(-v for v in self.vec))

    def prob(self, state: QubitState) -> float:
        """Born probability Tr[E rho], clipped to [0, 1]."""
        return min(max(self.scalar + _dot(self.vec, state.bloch), 0.0), 1.0)


def povm_from_lambda(d: Dichotomy, lam: float) -> tuple[Effect, Effect]:
    """Projectors onto the non-negative and negative parts of ``H(lam)``.

    The eigendecomposition is closed-form: eigenvalues ``lam/2 +- |h|`` with
    eigenvectors along ``+-h`` on the Bloch sphere.  Eigenvalues within
    ``EIGEN_TIE_TOL * max(1, |lam|)`` of zero count as non-negative.

    Returns:
        ``(pi_plus, pi_minus)`` with ``pi_plus + pi_minus = 1``.
    """
    H = helstrom_matrix(d, lam)
    n = H.vec_norm
    if n <= 1e-15:
        raise DegenerateError("H(lam) is proportional to the identity")
    tie = EIGEN_TIE_TOL * max(1.0, abs(lam))
    big, small = H.eigenvalues
    if small >= -tie:
        plus = Effect.identity()
    elif big >= -tie:
        plus = Effect.projector(H.vec)
    else:
        plus = Effect.zero()
    return plus, plus.complement()


def induced_joint(d: Dichotomy, lam: float) -> JointDist:
    """Joint of (state label, outcome) for the measurement generated by ``lam``.

    ``p[x][y] = prior[x] * Tr[pi_y rho_x]`` with ``rho_0 = rho``,
    ``rho_1 = sigma`` and ``pi_0`` the non-negative projector.
    """
    plus, _ = povm_from_lambda(d, lam)
    p0, p1 = d.prior
    q_rho = plus.prob(d.rho)
    q_sigma = plus.prob(d.sigma)
    return JointDist((p0 * q_rho, p0 * (1.0 - q_rho), p1 * q_sigma, p1 * (1.0 - q_sigma)))


class LorenzPoint(NamedTuple):
    lam: float
    q_rho: float
    q_sigma: float


def lorenz_curve(d: Dichotomy, n: int) -> list[LorenzPoint]:
    """Sample ``(Tr[pi_plus rho], Tr[pi_plus sigma])`` for ``n`` values of lam.

    The values are uniform over ``[-lambda_star, lambda_star]``, endpoints
    included.  Together with the complementary points ``(1 - q_rho,
    1 - q_sigma)`` and the corners (0, 0), (1, 1) they trace the boundary of
    the testing region.
    """
    if n < 2:
        raise ValueError(f"n={n} must be at least 2")
    ls = lambda_star(d)
    out = []
    for lam in np.linspace(-ls, ls, n):
        plus, _ = povm_from_lambda(d, float(lam))
        out.append(LorenzPoint(float(lam), plus.prob(d.rho), plus.prob(d.sigma)))
    return out


def lorenz_boundary(d: Dichotomy, n: int) -> list[LorenzPoint]:
    """Closed boundary: the ``lam`` sweep followed by its complements in reverse."""
    curve = lorenz_curve(d, n)
    back = [LorenzPoint(p.lam, 1.0 - p.q_rho, 1.0 - p.q_sigma) for p in reversed(curve)]
    return curve + back


# -- vectorised paths used by sweeps --------------------------------------------


class _Geometry(NamedTuple):
    r: np.ndarray
    s: np.ndarray
    w: np.ndarray
    diff: np.ndarray
    p0: float
    p1: float


def _geometry(d: Dichotomy) -> _Geometry:
    r = np.array(d.rho.bloch)
    s = np.array(d.sigma.bloch)
    return _Geometry(r, s, np.array(omega(d).bloch), r - s, d.prior[0], d.prior[1])


def outcome_probs_array(d: Dichotomy, lams) -> tuple[np.ndarray, np.ndarray]:
    """``(Tr[pi_plus rho], Tr[pi_plus sigma])`` for an array of lam values.

    Same conventions as :func:`povm_from_lambda`, evaluated with numpy.
    """
    g = _geometry(d)
    lams = np.asarray(lams, dtype=float)
    h = (lams[..., None] * g.w - g.diff) / 2.0
    norm = np.sqrt(np.einsum("...i,...i->...", h, h))
    tie = EIGEN_TIE_TOL * np.maximum(1.0, np.abs(lams))
    small = lams / 2.0 - norm
    big = lams / 2.0 + norm
    proj_r = 0.5 + (h @ g.r) / (2.0 * norm)
    proj_s = 0.5 + (h @ g.s) / (2.0 * norm)
    q_r = np.where(small >= -tie, 1.0, np.where(big >= -tie, proj_r, 0.0))
    q_s = np.where(small >= -tie, 1.0, np.where(big >= -tie, proj_s, 0.0))
    return np.clip(q_r, 0.0, 1.0), np.clip(q_s, 0.0, 1.0)
