"""Accessible information of qubit dichotomies.

The measurement is restricted to the eigenprojectors of ``H(lam)`` for
``lam`` in ``[-lambda_star, lambda_star]``.  :func:`bisect_accessible_info`
bisects on the sign of ``dI/dlam``; it finds the global maximum whenever
``I(lam)`` has no stationary point other than its maximum on that window.
That property is not proven, so two brute-force oracles are provided, and
:func:`concavity_scan` / :func:`probe_conjectures` look for counterexamples.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ._golden import golden_max
from .binary_dist import binary_entropy, mutual_information, mutual_information_array
from .qubit_dichotomy import Dichotomy, QubitState, induced_joint, lambda_star, outcome_probs_array

log = logging.getLogger(__name__)

NOISE_FLOOR = 1e-9
GAP_TOL = 1e-6


class SolverError(RuntimeError):
    """Bisection ran out of iterations; the partial report is attached."""

    def __init__(self, message: str, report: SolveReport):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SolverConfig:
    tol_lambda: float = 1e-10
    fd_step: float = 1e-6
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.tol_lambda > 0:
            raise ValueError(f"tol_lambda={self.tol_lambda!r} must be positive")
        if not self.fd_step > 0:
            raise ValueError(f"fd_step={self.fd_step!r} must be positive")
        if self.max_iter < 1:
            raise ValueError(f"max_iter={self.max_iter!r} must be at least 1")


@dataclass
class SolveReport:
    """Result of one bisection run.

    ``interval_widths[k]`` is the bracket width after ``k`` iterations
    (``interval_widths[0] == 2 * lambda_star``).
    """

    lambda_opt: float
    acc_info: float
    iterations: int
    derivative_trace: list[tuple[float, float]]
    lambda_star: float
    interval_widths: list[float]
    converged: bool
    one_sided_steps: int = 0
    oracle_gap: float | None = None
    config: SolverConfig = field(default_factory=SolverConfig)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["derivative_trace"] = [list(t) for t in self.derivative_trace]
        return d


class Derivative(NamedTuple):
    value: float
    one_sided: bool


class OracleResult(NamedTuple):
    """Brute-force maxima over the lam window and over planar projective measurements."""

    lambda_best: float
    info_best: float
    theta_best: float
    info_theta: float

    @property
    def value(self) -> float:
        return max(self.info_best, self.info_theta)


@dataclass
class ConcavityReport:
    grid: list[tuple[float, float]]
    stationary_points: list[float]
    quasi_concave: bool
    pseudo_concave: bool
    lambda_star: float = 0.0


def info_of_lambda(d: Dichotomy, lam: float) -> float:
    """I(X:Y) in bits for the measurement generated by ``H(lam)``."""
    return mutual_information(induced_joint(d, lam))


def info_array(d: Dichotomy, lams) -> np.ndarray:
    """Vectorised :func:`info_of_lambda`."""
    q_r, q_s = outcome_probs_array(d, lams)
    p0, p1 = d.prior
    return mutual_information_array(p0 * q_r, p0 * (1.0 - q_r), p1 * q_s, p1 * (1.0 - q_s))


def info_derivative(d: Dichotomy, lam: float, cfg: SolverConfig | None = None) -> Derivative:
    """Finite-difference ``dI/dlam`` with step ``cfg.fd_step``.

    Central differences are used unless ``lam +- h`` leaves the open window,
    in which case a one-sided difference is returned and flagged.
    """
    cfg = cfg or SolverConfig()
    h = cfg.fd_step
    ls = lambda_star(d)
    if 2.0 * h >= 2.0 * ls:
        raise ValueError(f"fd_step={h!r} too large for window half-width {ls!r}")
    if lam - h <= -ls:
        return Derivative((info_of_lambda(d, lam + h) - info_of_lambda(d, lam)) / h, True)
    if lam + h >= ls:
        return Derivative((info_of_lambda(d, lam) - info_of_lambda(d, lam - h)) / h, True)
    return Derivative((info_of_lambda(d, lam + h) - info_of_lambda(d, lam - h)) / (2.0 * h), False)


def bisect_accessible_info(d: Dichotomy, cfg: SolverConfig | None = None) -> SolveReport:
    """Bisection on the sign of ``dI/dlam`` over ``[-lambda_star, lambda_star]``.

    Starts at ``lam = 0``; a negative derivative moves the upper end down,
    anything else (zero included) moves the lower end up.  The bracket is
    tracked as a dyadic sub-interval of [0, 1] so that every width is exactly
    ``2 * lambda_star / 2**k``.

    Raises:
        SolverError: the width did not drop below ``tol_lambda`` within
            ``max_iter`` iterations.
    """
    cfg = cfg or SolverConfig()
    ls = lambda_star(d)
    span = 2.0 * ls
    t_lo, t_hi = 0.0, 1.0
    lam = 0.0
    trace: list[tuple[float, float]] = []
    widths = [span]
    one_sided = 0
    converged = span < cfg.tol_lambda
    it = 0
    while not converged and it < cfg.max_iter:
        der = info_derivative(d, lam, cfg)
        one_sided += der.one_sided
        trace.append((lam, der.value))
        t_mid = (t_lo + t_hi) / 2.0
        if der.value < 0.0:
            t_hi = t_mid
        else:
            t_lo = t_mid
        it += 1
        width = span * (t_hi - t_lo)
        widths.append(width)
        lam = ls * (t_lo + t_hi - 1.0)
        converged = width < cfg.tol_lambda
    report = SolveReport(
        lambda_opt=lam,
        acc_info=info_of_lambda(d, lam),
        iterations=it,
        derivative_trace=trace,
        lambda_star=ls,
        interval_widths=widths,
        converged=converged,
        one_sided_steps=one_sided,
        config=cfg,
    )
    if not converged:
        raise SolverError(
            f"bracket width {widths[-1]!r} still above tol_lambda={cfg.tol_lambda!r} "
            f"after {it} iterations",
            report,
        )
    return report


def _local_maxima(vals: np.ndarray, cyclic: bool, keep: int) -> list[int]:
    if cyclic:
        left, right = np.roll(vals, 1), np.roll(vals, -1)
    else:
        left = np.concatenate([[-np.inf], vals[:-1]])
        right = np.concatenate([vals[1:], [-np.inf]])
    idx = np.flatnonzero((vals >= left) & (vals >= right))
    if idx.size == 0:
        idx = np.array([int(np.argmax(vals))])
    order = idx[np.argsort(vals[idx])[::-1]]
    return [int(i) for i in order[:keep]]


def _plane_basis(d: Dichotomy) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of a plane containing both Bloch vectors."""
    r, s = d.rho.vector, d.sigma.vector
    e1 = (r - s) / np.linalg.norm(r - s)
    for v in (r, s, np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
        perp = v - (v @ e1) * e1
        norm = np.linalg.norm(perp)
        if norm > 1e-9:
            return e1, perp / norm
    raise AssertionError("unreachable: no vector perpendicular to e1")


def theta_info_array(d: Dichotomy, thetas, basis=None) -> np.ndarray:
    """I(X:Y) for projective measurements along ``cos(t) e1 + sin(t) e2``.

    Independent of the ``H(lam)`` parameterisation: the measurement direction
    is swept directly in the plane of the two Bloch vectors.
    """
    e1, e2 = basis if basis is not None else _plane_basis(d)
    thetas = np.asarray(thetas, dtype=float)
    n = np.cos(thetas)[..., None] * e1 + np.sin(thetas)[..., None] * e2
    q_r = np.clip((1.0 + n @ d.rho.vector) / 2.0, 0.0, 1.0)
    q_s = np.clip((1.0 + n @ d.sigma.vector) / 2.0, 0.0, 1.0)
    p0, p1 = d.prior
    return mutual_information_array(p0 * q_r, p0 * (1.0 - q_r), p1 * q_s, p1 * (1.0 - q_s))


def theta_sweep(d: Dichotomy, n_theta: int = 1024, xtol: float = 1e-10, keep: int = 3) -> tuple[float, float]:
    """Best planar projective measurement: grid over [0, pi) plus golden refinement."""
    basis = _plane_basis(d)
    thetas = np.arange(n_theta) * (math.pi / n_theta)
    vals = theta_info_array(d, thetas, basis)
    step = math.pi / n_theta
    best = (float(thetas[int(np.argmax(vals))]), float(np.max(vals)))

    def f(t: float) -> float:
        return float(theta_info_array(d, np.array([t]), basis)[0])

    for i in _local_maxima(vals, cyclic=True, keep=keep):
        t, v = golden_max(f, thetas[i] - step, thetas[i] + step, xtol)
        if v > best[1]:
            best = (t % math.pi, v)
    return best


def lambda_sweep(d: Dichotomy, n_grid: int = 200, xtol: float = 1e-10, keep: int = 3) -> tuple[float, float]:
    """Best ``lam`` in the window: uniform grid plus golden refinement."""
    ls = lambda_star(d)
    lams = np.linspace(-ls, ls, n_grid)
    vals = info_array(d, lams)
    best = (float(lams[int(np.argmax(vals))]), float(np.max(vals)))
    for i in _local_maxima(vals, cyclic=False, keep=keep):
        lo, hi = lams[max(i - 1, 0)], lams[min(i + 1, n_grid - 1)]
        lam, v = golden_max(lambda x: info_of_lambda(d, x), lo, hi, xtol)
        if v > best[1]:
            best = (lam, v)
    return best


def brute_force_accessible_info(d: Dichotomy, n_grid: int = 200, n_theta: int = 1024) -> OracleResult:
    """Grid-and-golden maxima over the lam window and over planar measurements."""
    if n_grid < 10:
        raise ValueError(f"n_grid={n_grid} must be at least 10")
    lam, info = lambda_sweep(d, n_grid)
    theta, info_t = theta_sweep(d, n_theta)
    return OracleResult(lam, info, theta, info_t)


def unimodality(lams, vals, noise: float = NOISE_FLOOR) -> tuple[list[float], bool, bool]:
    """Stationary points and (quasi, pseudo) concavity verdicts for samples.

    Successive differences with magnitude at most ``noise`` count as flat.
    A stationary point is recorded wherever the sign of the significant
    differences flips.

    * quasi-concave: the signs flip at most once, from rising to falling.
    * pseudo-concave: no flip from falling to rising, and every local
      maximum is within ``noise`` of the largest sample.
    """
    lams = np.asarray(lams, dtype=float)
    vals = np.asarray(vals, dtype=float)
    diffs = np.diff(vals)
    signs = np.where(np.abs(diffs) <= noise, 0, np.sign(diffs)).astype(int)

    stationary: list[float] = []
    peaks: list[int] = []
    valleys = 0
    prev_sign, prev_idx = 0, -1
    for k, sg in enumerate(signs):
        if sg == 0:
            continue
        if prev_sign and sg != prev_sign:
            j = int(np.argmax(vals[prev_idx + 1 : k + 1]) if prev_sign > 0 else np.argmin(vals[prev_idx + 1 : k + 1]))
            j += prev_idx + 1
            stationary.append(float(lams[j]))
            if prev_sign > 0:
                peaks.append(j)
            else:
                valleys += 1
        prev_sign, prev_idx = sg, k

    nonzero = signs[signs != 0]
    falling = np.flatnonzero(nonzero < 0)
    quasi = falling.size == 0 or bool(np.all(nonzero[falling[0]:] < 0))
    top = float(np.max(vals))
    pseudo = valleys == 0 and all(vals[i] >= top - noise for i in peaks)
    return stationary, quasi, pseudo


def concavity_scan(d: Dichotomy, n_grid: int = 400, noise: float = NOISE_FLOOR) -> ConcavityReport:
    """Sample ``I(lam)`` across the window and test it with :func:`unimodality`.

    Samples sit at the centres of ``n_grid`` equal cells, so the window
    endpoints (where the first effect degenerates to the identity) are not
    evaluated.
    """
    if n_grid < 100:
        raise ValueError(f"n_grid={n_grid} must be at least 100")
    ls = lambda_star(d)
    lams = -ls + (np.arange(n_grid) + 0.5) * (2.0 * ls / n_grid)
    vals = info_array(d, lams)
    stationary, quasi, pseudo = unimodality(lams, vals, noise)
    return ConcavityReport(
        grid=list(zip(lams.tolist(), vals.tolist())),
        stationary_points=stationary,
        quasi_concave=quasi,
        pseudo_concave=pseudo,
        lambda_star=ls,
    )


def info_upper_bound(d: Dichotomy) -> float:
    """H(X) = h(p0), which no measurement can exceed."""
    return binary_entropy(d.prior[0])


# -- random dichotomies and the conjecture probe ------------------------------


def random_bloch(rng: np.random.Generator) -> tuple[float, float, float]:
    """Uniform point in the Bloch ball (rejection from the cube)."""
    while True:
        v = rng.uniform(-1.0, 1.0, 3)
        if v @ v <= 1.0:
            return tuple(float(x) for x in v)


def random_pure_bloch(rng: np.random.Generator) -> tuple[float, float, float]:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return tuple(float(x) for x in v)


def random_dichotomy(rng: np.random.Generator, pure: bool = False) -> Dichotomy:
    """Two states uniform in the ball (or on the sphere) and a uniform prior."""
    draw = random_pure_bloch if pure else random_bloch
    while True:
        r, s = draw(rng), draw(rng)
        p0 = float(rng.uniform())
        if sum((u - v) ** 2 for u, v in zip(r, s)) / 2.0 > 1e-9:
            return Dichotomy(QubitState(r), QubitState(s), (p0, 1.0 - p0))


class ScanRow(NamedTuple):
    seed: int
    index: int
    lambda_opt: float
    acc_info: float
    oracle_gap: float
    quasi: bool
    pseudo: bool


@dataclass
class ScanResult:
    seed: int
    rows: list[ScanRow]
    config: SolverConfig
    n_grid: int

    @property
    def quasi_violations(self) -> int:
        return sum(not r.quasi for r in self.rows)

    @property
    def pseudo_violations(self) -> int:
        return sum(not r.pseudo for r in self.rows)

    @property
    def gap_violations(self) -> int:
        return sum(r.oracle_gap > GAP_TOL for r in self.rows)


def _scan_one(args: tuple[int, int, Dichotomy, SolverConfig, int]) -> ScanRow:
    seed, index, d, cfg, n_grid = args
    conc = concavity_scan(d, max(n_grid, 100))
    try:
        rep = bisect_accessible_info(d, cfg)
    except SolverError as exc:
        rep = exc.report
    oracle = brute_force_accessible_info(d, n_grid)
    gap = oracle.value - rep.acc_info
    if gap > GAP_TOL:
        log.warning("dichotomy %d (seed %d): oracle exceeds bisection by %.3g bits", index, seed, gap)
    return ScanRow(seed, index, rep.lambda_opt, rep.acc_info, gap, conc.quasi_concave, conc.pseudo_concave)


def probe_conjectures(
    count: int, seed: int, cfg: SolverConfig | None = None, n_grid: int = 200, workers: int = 1
) -> ScanResult:
    """Bisection, oracles and concavity tests on ``count`` random dichotomies.

    All dichotomies are drawn up front from ``numpy.random.default_rng(seed)``
    so results do not depend on ``workers``; rows come back in index order.
    """
    if count < 1:
        raise ValueError(f"count={count} must be at least 1")
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(seed)
    jobs = [(seed, i, random_dichotomy(rng), cfg, n_grid) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        rows = [_scan_one(job) for job in jobs]
    return ScanResult(seed, rows, cfg, n_grid)


def symmetric_dichotomy(radius: float, angle: float, p0: float = 0.5) -> Dichotomy:
    """Bloch vectors at +-``angle`` from the z axis in the x-z plane, same length."""
    r = (radius * math.sin(angle), 0.0, radius * math.cos(angle))
    s = (-radius * math.sin(angle), 0.0, radius * math.cos(angle))
    return Dichotomy(QubitState(r), QubitState(s), (p0, 1.0 - p0))
