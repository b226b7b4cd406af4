"""Binary joint distributions: (a, b, lambda) coordinates, information,
guessing probability, and the information-guessing tradeoff.

A 2x2 joint ``p[x][y]`` is expanded on the four sign matrices

    M0 = [[1, 1], [1, 1]]     M1 = [[1, 1], [-1, -1]]
    M2 = [[1, -1], [1, -1]]   M3 = [[1, -1], [-1, 1]]

as ``p = (M0 + a M1 + b M2 + lam M3) / 4``.  ``a`` is the bias of the
X-marginal, ``b`` the bias of the Y-marginal and ``lam`` the correlation.
All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

ENTRY_TOL = 1e-12
CONDITION_TOL = 1e-12

_SIGNS = (
    (1.0, 1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0, -1.0),
    (1.0, -1.0, 1.0, -1.0),
    (1.0, -1.0, -1.0, 1.0),
)


class DomainError(ValueError):
    """A value lies outside the set of valid binary distributions."""


class InfeasibleError(ValueError):
    """The guessing-probability cap cannot be met by any joint."""


class BoundaryPointError(ArithmeticError):
    """A derivative was requested at a joint with a zero entry."""


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(p: float) -> float:
    """h(p) in bits, with h(0) = h(1) = 0."""
    return -_xlog2x(p) - _xlog2x(1.0 - p)


def shannon_entropy(probs: Sequence[float]) -> float:
    return -math.fsum(_xlog2x(p) for p in probs)


@dataclass(frozen=True)
class ParamCoords:
    """Coordinates ``(a, b, lam)`` of a binary joint distribution.

    Construction checks ``a, b`` in [-1, 1] and
    ``lam`` in [-1 + |a + b|, 1 - |a - b|] up to ``ENTRY_TOL``.
    """

    a: float
    b: float
    lam: float

    def __post_init__(self) -> None:
        a, b, lam = self.a, self.b, self.lam
        for name, v in (("a", a), ("b", b), ("lam", lam)):
            if not math.isfinite(v):
                raise DomainError(f"{name}={v!r} is not finite")
        if abs(a) > 1.0 + ENTRY_TOL:
            raise DomainError(f"a={a!r} outside [-1, 1]")
        if abs(b) > 1.0 + ENTRY_TOL:
            raise DomainError(f"b={b!r} outside [-1, 1]")
        lo, hi = lambda_bounds(a, b)
        if lam < lo - 4 * ENTRY_TOL:
            raise DomainError(
                f"lam={lam!r} below lower bound -1 + |a + b| = {lo!r}"
            )
        if lam > hi + 4 * ENTRY_TOL:
            raise DomainError(
                f"lam={lam!r} above upper bound 1 - |a - b| = {hi!r}"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.lam)


def lambda_bounds(a: float, b: float) -> tuple[float, float]:
    """Feasible interval of the correlation for fixed marginal biases."""
    return -1.0 + abs(a + b), 1.0 - abs(a - b)


def b_bounds(a: float, lam: float) -> tuple[float, float]:
    """Feasible interval of the Y-bias for fixed ``a`` and ``lam``."""
    return -1.0 + abs(a + lam), 1.0 - abs(a - lam)


@dataclass(frozen=True)
class MarginalX:
    p0: float
    p1: float

    def __post_init__(self) -> None:
        if min(self.p0, self.p1) < -ENTRY_TOL or abs(self.p0 + self.p1 - 1.0) > ENTRY_TOL:
            raise DomainError(f"invalid marginal ({self.p0!r}, {self.p1!r})")

    @classmethod
    def from_p0(cls, p0: float) -> MarginalX:
        return cls(p0, 1.0 - p0)

    @property
    def bias(self) -> float:
        return self.p0 - self.p1

    def __iter__(self):
        return iter((self.p0, self.p1))


@dataclass(frozen=True)
class JointDist:
    """A validated 2x2 joint distribution, stored row-major.

    ``entries = (p00, p01, p10, p11)`` where the first index is x and the
    second is y.  Entries down to ``-ENTRY_TOL`` and sums within
    ``ENTRY_TOL`` of one are accepted, then clamped and renormalised.
    """

    entries: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.entries)
        if len(vals) != 4:
            raise DomainError(f"expected 4 entries, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite entry in {vals!r}")
        if min(vals) < -ENTRY_TOL:
            raise DomainError(f"negative entry {min(vals)!r} in {vals!r}")
        total = math.fsum(vals)
        if abs(total - 1.0) > ENTRY_TOL:
            raise DomainError(f"entries sum to {total!r}, not 1")
        vals = tuple(max(v, 0.0) for v in vals)
        total = math.fsum(vals)
        if total != 1.0:
            vals = tuple(v / total for v in vals)
        object.__setattr__(self, "entries", vals)

    @classmethod
    def from_matrix(cls, m) -> JointDist:
        arr = np.asarray(m, dtype=float)
        if arr.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {arr.shape}")
        return cls(tuple(arr.ravel().tolist()))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(2, 2)

    @property
    def marginal_x(self) -> MarginalX:
        p00, p01, p10, p11 = self.entries
        return MarginalX(p00 + p01, p10 + p11)

    @property
    def marginal_y(self) -> tuple[float, float]:
        p00, p01, p10, p11 = self.entries
        return (p00 + p10, p01 + p11)

    @property
    def trace(self) -> float:
        return self.entries[0] + self.entries[3]

    @property
    def coords(self) -> ParamCoords:
        return coords_from_joint(self)

    def is_interior(self) -> bool:
        return min(self.entries) > 0.0

    def swap_rows(self) -> JointDist:
        p00, p01, p10, p11 = self.entries
        return JointDist((p10, p11, p00, p01))

    def swap_columns(self) -> JointDist:
        p00, p01, p10, p11 = self.entries
        return JointDist((p01, p00, p11, p10))

    def to_list(self) -> list[float]:
        return list(self.entries)


def joint_from_coords(coords: ParamCoords) -> JointDist:
    a, b, lam = coords.a, coords.b, coords.lam
    return JointDist(
        (
            (1.0 + a + b + lam) / 4.0,
            (1.0 + a - b - lam) / 4.0,
            (1.0 - a + b - lam) / 4.0,
            (1.0 - a - b + lam) / 4.0,
        )
    )


def coords_from_joint(p: JointDist) -> ParamCoords:
    """Inverse of :func:`joint_from_coords` via ``c_k = Tr[p M_k^T]``."""
    e = p.entries
    c = [math.fsum(s * v for s, v in zip(signs, e)) for signs in _SIGNS]
    # c[0] is the total mass, equal to one by validation
    return ParamCoords(c[1], c[2], c[3])


def joint(a: float, b: float, lam: float) -> JointDist:
    """Shorthand for ``joint_from_coords(ParamCoords(a, b, lam))``."""
    return joint_from_coords(ParamCoords(a, b, lam))


def mutual_information(p: JointDist) -> float:
    """I(X:Y) in bits; zero entries contribute nothing."""
    p00, p01, p10, p11 = p.entries
    px = (p00 + p01, p10 + p11)
    py = (p00 + p10, p01 + p11)
    total = math.fsum(
        v * math.log2(v / (px[i // 2] * py[i % 2]))
        for i, v in enumerate((p00, p01, p10, p11))
        if v > 0.0
    )
    return max(total, 0.0)


def conditional_entropy(p: JointDist) -> float:
    """H(X|Y) = H(X, Y) - H(Y) in bits."""
    return max(shannon_entropy(p.entries) - shannon_entropy(p.marginal_y), 0.0)


def guessing_probability(p: JointDist) -> float:
    """Optimal probability of guessing X from Y, ``(1 + max(|a|, |lam|)) / 2``.

    No tie-break is needed when ``|a| == |lam|``; both branches agree.
    """
    c = coords_from_joint(p)
    return (1.0 + max(abs(c.a), abs(c.lam))) / 2.0


def guessing_probability_direct(p: JointDist) -> float:
    """Sum over y of max over x of p(x, y); independent of the coordinates."""
    m = p.matrix
    return float(m.max(axis=0).sum())


def fano_upper_bound(P: float, alphabet_size: int = 2, strengthened: bool = False) -> float:
    """Upper bound on H(X|Y) from the guessing probability ``P``.

    ``h(P) + (1 - P) log2(n)``; with ``strengthened`` the constant becomes
    ``log2(n - 1)`` (zero for binary alphabets).
    """
    if alphabet_size < 2:
        raise DomainError(f"alphabet_size={alphabet_size} must be at least 2")
    if not (1.0 / alphabet_size - ENTRY_TOL <= P <= 1.0 + ENTRY_TOL):
        raise DomainError(f"P={P!r} outside [1/{alphabet_size}, 1]")
    P = min(max(P, 0.0), 1.0)
    k = alphabet_size - 1 if strengthened else alphabet_size
    return binary_entropy(P) + (1.0 - P) * math.log2(k)


def hellman_raviv_lower_bound(P: float) -> float:
    """Lower bound ``2 (1 - P)`` on H(X|Y)."""
    if not (-ENTRY_TOL <= P <= 1.0 + ENTRY_TOL):
        raise DomainError(f"P={P!r} outside [0, 1]")
    return 2.0 * (1.0 - P)


def sufficient_condition(
    P_y: float, P_z: float, alphabet_size: int = 2, strengthened: bool = False
) -> bool:
    """Premise that forces I(X:Y) >= I(X:Z) for joints sharing their X-marginal.

    Holds when the Hellman-Raviv bound for Z is at least the Fano bound for Y.
    """
    return hellman_raviv_lower_bound(P_z) >= fano_upper_bound(P_y, alphabet_size, strengthened)


def necessary_condition(
    P_y: float, P_z: float, alphabet_size: int = 2, strengthened: bool = False
) -> bool:
    """Consequence of I(X:Y) >= I(X:Z) for joints sharing their X-marginal.

    The Fano bound for Z is then at least the Hellman-Raviv bound for Y.
    """
    return fano_upper_bound(P_z, alphabet_size, strengthened) >= hellman_raviv_lower_bound(P_y)


def canonicalize(coords: ParamCoords) -> tuple[ParamCoords, bool, bool]:
    """Relabel rows/columns so that ``a >= 0`` and ``lam >= 0``.

    Returns the new coordinates and the (row_swapped, column_swapped) flags.
    Row swap maps (a, b, lam) -> (-a, b, -lam); column swap maps
    (a, b, lam) -> (a, -b, -lam).  Both leave I and P unchanged.
    """
    a, b, lam = coords.as_tuple()
    rows = a < 0.0
    if rows:
        a, lam = -a, -lam
    cols = lam < 0.0
    if cols:
        b, lam = -b, -lam
    return ParamCoords(a, b, lam), rows, cols


def tradeoff_max(p_x: MarginalX, cap: float) -> JointDist:
    """Joint with X-marginal ``p_x`` maximising I(X:Y) subject to P_{X|Y} <= cap.

    The optimum sits at ``a* = 2 p0 - 1``, ``lam* = 2 cap - 1`` and
    ``b* = lam* + a* - 1`` (for ``p0 >= p1``; otherwise X is relabelled and
    the answer mapped back).  Caps above one are clipped to one.

    Raises:
        InfeasibleError: ``cap < max(p_x)``, since no joint guesses worse than
            always answering the likelier input.
    """
    p0, p1 = p_x.p0, p_x.p1
    flip = p0 < p1
    if flip:
        p0, p1 = p1, p0
    if cap < p0 - ENTRY_TOL:
        raise InfeasibleError(
            f"cap={cap!r} is below max p_X={p0!r}; guessing probability can "
            "never fall below the trivial guess of the likelier input"
        )
    cap = min(max(cap, p0), 1.0)
    a_star = p0 - p1
    lam_star = 2.0 * cap - 1.0
    b_star = lam_star + a_star - 1.0
    if flip:
        return joint(-a_star, b_star, -lam_star)
    return joint(a_star, b_star, lam_star)


class MonotonicityResult(NamedTuple):
    """Outcome of the monotonicity characterisation for one joint.

    ``holds`` is True when no competitor with the same X-marginal and no
    larger guessing probability carries more information.  ``vacuous`` marks
    joints with P_{X|Y} = max p_X, where the two conditions do not apply;
    there ``holds`` is decided by comparing against the tradeoff optimum
    directly.  ``witness`` is the constructive competitor when ``holds`` is
    False.
    """

    holds: bool
    vacuous: bool
    trace_condition: bool
    guessing_condition: bool
    witness: JointDist | None


def _conditions(c: ParamCoords) -> tuple[bool, bool]:
    p = joint_from_coords(c)
    px0 = p.marginal_x.p0
    py0 = p.marginal_y[0]
    P = (1.0 + max(abs(c.a), abs(c.lam))) / 2.0
    trace_ok = p.trace >= px0 - CONDITION_TOL
    guess_ok = abs(P - (py0 + (1.0 - px0))) <= CONDITION_TOL
    return trace_ok, guess_ok


def monotonicity_holds(p: JointDist) -> MonotonicityResult:
    """Decide whether P_{X|Y} >= P_{X|Z} implies I(X:Y) >= I(X:Z) for every Z.

    The two conditions (trace at least p_{X=0}; guessing probability equal to
    p_{Y=0} + p_{X=1}) are evaluated after canonical relabelling.  When
    ``a == 0`` both row orientations are canonical and either may satisfy them.
    """
    coords = coords_from_joint(p)
    canon, _, _ = canonicalize(coords)
    candidates = [canon]
    if abs(canon.a) <= CONDITION_TOL:
        candidates.append(ParamCoords(canon.a, -canon.b, canon.lam))
    checks = [_conditions(c) for c in candidates]
    trace_ok, guess_ok = next((t for t in checks if all(t)), checks[0])
    holds = trace_ok and guess_ok

    P = guessing_probability(p)
    vacuous = P <= max(p.marginal_x) + CONDITION_TOL
    if vacuous:
        best = tradeoff_max(p.marginal_x, P)
        holds = mutual_information(best) <= mutual_information(p) + CONDITION_TOL
        return MonotonicityResult(holds, True, trace_ok, guess_ok, None if holds else best)
    witness = None if holds else tradeoff_max(p.marginal_x, P)
    return MonotonicityResult(holds, False, trace_ok, guess_ok, witness)


class InfoDerivatives(NamedTuple):
    d_lam: float
    d_b: float
    d2_lam: float
    d2_b: float


def info_derivatives(coords: ParamCoords) -> InfoDerivatives:
    """Analytic first and second partial derivatives of I in bits.

    Raises:
        BoundaryPointError: some joint entry is zero, where the logarithms
            diverge.
    """
    p = joint_from_coords(coords)
    p00, p01, p10, p11 = p.entries
    if min(p.entries) <= 0.0:
        raise BoundaryPointError(
            f"derivative undefined on the boundary: entries {p.entries!r}"
        )
    py0, py1 = p.marginal_y
    ln2 = math.log(2.0)
    d_lam = 0.25 * math.log2((p00 * p11) / (p01 * p10))
    d_b = 0.25 * math.log2((p00 * p10 * py1 * py1) / (p01 * p11 * py0 * py0))
    inv_sum = 1.0 / p00 + 1.0 / p01 + 1.0 / p10 + 1.0 / p11
    d2_lam = inv_sum / (16.0 * ln2)
    d2_b = (inv_sum / 16.0 + 1.0 / (coords.b * coords.b - 1.0)) / ln2
    return InfoDerivatives(d_lam, d_b, d2_lam, d2_b)


# -- vectorised helpers for sweeps and grid oracles ---------------------------


def mutual_information_array(p00, p01, p10, p11) -> np.ndarray:
    """Elementwise I(X:Y) in bits for arrays of joint entries.

    Entries slightly below zero (rounding at the domain boundary) are
    clipped to zero.
    """
    ps = [np.clip(np.asarray(v, dtype=float), 0.0, None) for v in (p00, p01, p10, p11)]
    px = (ps[0] + ps[1], ps[2] + ps[3])
    py = (ps[0] + ps[2], ps[1] + ps[3])
    total = np.zeros(np.broadcast(*ps).shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        for i, v in enumerate(ps):
            pos = v > 0.0
            ratio = np.where(pos, v, 1.0) / np.where(pos, px[i // 2] * py[i % 2], 1.0)
            total = total + np.where(pos, v * np.log2(ratio), 0.0)
    return np.maximum(total, 0.0)


def mutual_information_coords(a, b, lam) -> np.ndarray:
    a, b, lam = (np.asarray(v, dtype=float) for v in (a, b, lam))
    return mutual_information_array(
        (1.0 + a + b + lam) / 4.0,
        (1.0 + a - b - lam) / 4.0,
        (1.0 - a + b - lam) / 4.0,
        (1.0 - a - b + lam) / 4.0,
    )


class GridOptimum(NamedTuple):
    b: float
    lam: float
    info: float


def tradeoff_grid_search(
    p_x: MarginalX, cap: float, step: float = 1e-3, refine_step: float = 1e-5, refine_halfwidth: float = 2e-3
) -> GridOptimum:
    """Brute-force maximum of I over the feasible (b, lam) rectangle.

    Independent of :func:`tradeoff_max`: the X-bias is fixed by ``p_x``, the
    cap restricts |lam| <= 2 cap - 1, and a rectangular grid over (b, lam)
    keeps only points with non-negative entries.  The best coarse point is
    refined on a finer grid around it.
    """
    a = p_x.p0 - p_x.p1
    lam_max = min(2.0 * cap - 1.0, 1.0)
    if lam_max < abs(a) - ENTRY_TOL:
        raise InfeasibleError(f"cap={cap!r} is below max p_X")

    def search(b_lo, b_hi, l_lo, l_hi, h):
        bs = np.arange(b_lo, b_hi + h / 2, h)
        ls = np.arange(l_lo, l_hi + h / 2, h)
        # include the exact edges so boundary optima are representable
        bs = np.unique(np.clip(np.concatenate([bs, [b_lo, b_hi]]), b_lo, b_hi))
        ls = np.unique(np.clip(np.concatenate([ls, [l_lo, l_hi]]), l_lo, l_hi))
        best = (-np.inf, 0.0, 0.0)
        for chunk in np.array_split(ls, max(1, len(ls) // 256)):
            B, L = np.meshgrid(bs, chunk, indexing="ij")
            lo, hi = -1.0 + np.abs(a + B), 1.0 - np.abs(a - B)
            feasible = (L >= lo - 1e-12) & (L <= hi + 1e-12)
            if not feasible.any():
                continue
            vals = np.where(feasible, mutual_information_coords(a, B, L), -np.inf)
            k = np.unravel_index(np.argmax(vals), vals.shape)
            if vals[k] > best[0]:
                best = (float(vals[k]), float(B[k]), float(L[k]))
        return best

    lam_lo = -lam_max
    info, b0, l0 = search(-1.0, 1.0, lam_lo, lam_max, step)
    info2, b1, l1 = search(
        max(-1.0, b0 - refine_halfwidth),
        min(1.0, b0 + refine_halfwidth),
        max(lam_lo, l0 - refine_halfwidth),
        min(lam_max, l0 + refine_halfwidth),
        refine_step,
    )
    if info2 >= info:
        return GridOptimum(b1, l1, info2)
    return GridOptimum(b0, l0, info)
