from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-10, max_iter: int = 200
) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Only interior points are evaluated.  Returns ``(x, f(x))`` for the best
    point seen.
    """
    if hi < lo:
        lo, hi = hi, lo
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best = (x1, f1) if f1 >= f2 else (x2, f2)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
            if f1 > best[1]:
                best = (x1, f1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
            if f2 > best[1]:
                best = (x2, f2)
    return best
