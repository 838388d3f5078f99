"""Complete enumeration of integer points of a bounded system.

The system is ``lo_i <= a_i . x + b_i <= hi_i`` over a box, together with
congruences ``c_k . x + e_k = 0 (mod m_k)``.  The search is a depth-first
search with bounds propagation over exact integers, so every point inside
the box that satisfies all rows is reported.

Optionally the box is first shrunk with linear programming.  The LP is solved
in floating point, but the bound that is kept is recomputed exactly from the
(rationalised) dual multipliers, so it is valid whatever the LP accuracy;
the same certificate is used to prune infeasible sub-boxes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

__all__ = ["IntegerSystem", "ResourceLimitError", "enumerate_points", "safe_lp_box"]


class ResourceLimitError(RuntimeError):
    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


@dataclass
class IntegerSystem:
    A: list[list[int]]
    b: list[int]
    lo: list[int]
    hi: list[int]
    box_lo: list[int]
    box_hi: list[int]
    congruences: list[tuple[list[int], int, int]] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return len(self.box_lo)

    def satisfied(self, x: Sequence[int]) -> bool:
        for a, b, lo, hi in zip(self.A, self.b, self.lo, self.hi):
            v = sum(ai * xi for ai, xi in zip(a, x)) + b
            if v < lo or v > hi:
                return False
        for c, e, m in self.congruences:
            if (sum(ci * xi for ci, xi in zip(c, x)) + e) % m:
                return False
        return all(l <= v <= h for v, l, h in zip(x, self.box_lo, self.box_hi))


def _ceil_div(a, b):
    return -((-a) // b)


class _Propagator:
    def __init__(self, sys: IntegerSystem):
        A = np.array(sys.A, dtype=object).reshape(len(sys.A), sys.nvars)
        big = max([abs(int(v)) for v in A.flat] + [1])
        span = max([abs(v) for v in sys.box_lo + sys.box_hi] + [1])
        bound = max([abs(v) for v in sys.lo + sys.hi + sys.b] + [1])
        # int64 is exact as long as every partial sum stays far below 2^62
        if big * span * (sys.nvars + 1) + 2 * bound < 2**60:
            dtype = np.int64
        else:
            dtype = object
        self.A = A.astype(dtype)
        self.pos = self.A > 0
        self.neg = self.A < 0
        self.lo = np.array(sys.lo, dtype=dtype) - np.array(sys.b, dtype=dtype)
        self.hi = np.array(sys.hi, dtype=dtype) - np.array(sys.b, dtype=dtype)
        self.dtype = dtype
        self.nz = [np.nonzero(self.A[:, j])[0] for j in range(sys.nvars)]

    def propagate(self, lo: np.ndarray, hi: np.ndarray) -> bool:
        """Tighten lo/hi in place; False when infeasible."""
        A, pos, neg = self.A, self.pos, self.neg
        for _ in range(64):
            # per-entry contribution bounds
            cmin = np.where(pos, A * lo, np.where(neg, A * hi, 0))
            cmax = np.where(pos, A * hi, np.where(neg, A * lo, 0))
            rmin = cmin.sum(axis=1)
            rmax = cmax.sum(axis=1)
            if np.any(rmin > self.hi) or np.any(rmax < self.lo):
                return False
            # a_ij x_j >= lo_i - (rmax_i - cmax_ij), a_ij x_j <= hi_i - (rmin_i - cmin_ij)
            low_rhs = self.lo[:, None] - (rmax[:, None] - cmax)
            up_rhs = self.hi[:, None] - (rmin[:, None] - cmin)
            changed = False
            safe = np.where(A == 0, 1, A)
            # a > 0: x >= ceil(low/a), x <= floor(up/a); a < 0: the reverse
            new_lo_pos = np.where(pos, _ceil_div(low_rhs, safe), lo[None, :])
            new_hi_pos = np.where(pos, up_rhs // safe, hi[None, :])
            new_lo_neg = np.where(neg, _ceil_div(up_rhs, safe), lo[None, :])
            new_hi_neg = np.where(neg, low_rhs // safe, hi[None, :])
            nlo = np.maximum(new_lo_pos.max(axis=0), new_lo_neg.max(axis=0))
            nhi = np.minimum(new_hi_pos.min(axis=0), new_hi_neg.min(axis=0))
            nlo = np.maximum(nlo, lo)
            nhi = np.minimum(nhi, hi)
            if np.any(nlo > nhi):
                return False
            if np.any(nlo != lo) or np.any(nhi != hi):
                changed = True
                lo[:] = nlo
                hi[:] = nhi
            if not changed:
                return True
        return True


# --- safe LP bounds --------------------------------------------------------


def _lp_matrices(sys: IntegerSystem):
    A = np.array(sys.A, dtype=float).reshape(len(sys.A), sys.nvars)
    rows_ub, rhs_ub, rows_eq, rhs_eq = [], [], [], []
    for i in range(len(sys.A)):
        lo, hi = sys.lo[i] - sys.b[i], sys.hi[i] - sys.b[i]
        if lo == hi:
            rows_eq.append(i)
            rhs_eq.append(lo)
            continue
        rows_ub.append((i, 1))
        rhs_ub.append(hi)
        rows_ub.append((i, -1))
        rhs_ub.append(-lo)
    return A, rows_ub, rhs_ub, rows_eq, rhs_eq


def _exact_lower_bound(sys, c, y_ub, y_eq, rows_ub, rhs_ub, rows_eq, rhs_eq, lo, hi) -> Fraction:
    """Valid lower bound on c.x over the system from arbitrary multipliers."""
    n = sys.nvars
    r = [Fraction(v) for v in c]
    bound = Fraction(0)
    for (i, sgn), rhs, y in zip(rows_ub, rhs_ub, y_ub):
        if y >= 0:
            continue
        y = Fraction(y)
        bound += y * rhs
        for j in range(n):
            if sys.A[i][j]:
                r[j] -= y * sgn * sys.A[i][j]
    for i, rhs, y in zip(rows_eq, rhs_eq, y_eq):
        if y == 0:
            continue
        y = Fraction(y)
        bound += y * rhs
        for j in range(n):
            if sys.A[i][j]:
                r[j] -= y * sys.A[i][j]
    for j in range(n):
        bound += min(r[j] * lo[j], r[j] * hi[j])
    return bound


def safe_lp_box(sys: IntegerSystem, lo: Sequence[int], hi: Sequence[int]):
    """Shrink [lo, hi] with LP; returns (lo, hi) or None if provably empty."""
    from scipy.optimize import linprog

    A, rows_ub, rhs_ub, rows_eq, rhs_eq = _lp_matrices(sys)
    n = sys.nvars
    A_ub = np.array([A[i] * s for i, s in rows_ub]).reshape(len(rows_ub), n)
    A_eq = np.array([A[i] for i in rows_eq]).reshape(len(rows_eq), n)
    lo, hi = list(lo), list(hi)

    if not _feasible_or_unknown(sys, A_ub, rhs_ub, A_eq, rhs_eq, rows_ub, rows_eq, lo, hi):
        return None
    for j in range(n):
        if lo[j] == hi[j]:
            continue
        for sense in (1, -1):
            c = [0] * n
            c[j] = sense
            res = linprog(
                c,
                A_ub=A_ub if len(rows_ub) else None,
                b_ub=rhs_ub if len(rows_ub) else None,
                A_eq=A_eq if len(rows_eq) else None,
                b_eq=rhs_eq if len(rows_eq) else None,
                bounds=list(zip(lo, hi)),
                method="highs",
            )
            if res.status != 0:
                continue
            y_ub = list(res.ineqlin.marginals) if len(rows_ub) else []
            y_eq = list(res.eqlin.marginals) if len(rows_eq) else []
            lb = _exact_lower_bound(sys, c, y_ub, y_eq, rows_ub, rhs_ub, rows_eq, rhs_eq, lo, hi)
            if sense == 1:
                lo[j] = max(lo[j], math.ceil(lb))
            else:
                hi[j] = min(hi[j], math.floor(-lb))
            if lo[j] > hi[j]:
                return None
    return lo, hi


def _feasible_or_unknown(sys, A_ub, rhs_ub, A_eq, rhs_eq, rows_ub, rows_eq, lo, hi) -> bool:
    """False only when infeasibility of the LP relaxation is certified exactly."""
    from scipy.optimize import linprog

    n = sys.nvars
    # minimise t subject to A_ub x - t <= b_ub, |A_eq x - b_eq| <= t
    m_ub, m_eq = len(rows_ub), len(rows_eq)
    rows = []
    rhs = []
    for k in range(m_ub):
        rows.append(list(A_ub[k]) + [-1.0])
        rhs.append(rhs_ub[k])
    for k in range(m_eq):
        rows.append(list(A_eq[k]) + [-1.0])
        rhs.append(rhs_eq[k])
        rows.append(list(-A_eq[k]) + [-1.0])
        rhs.append(-rhs_eq[k])
    if not rows:
        return True
    c = [0.0] * n + [1.0]
    span = sum(abs(v) for v in lo + hi) + 1
    big = float(max(abs(x) for r in rows for x in r) * span + max(abs(v) for v in rhs) + 1)
    res = linprog(c, A_ub=np.array(rows), b_ub=rhs, bounds=list(zip(lo, hi)) + [(0, big)], method="highs")
    if res.status != 0 or res.fun <= 1e-9:
        return True
    y = list(res.ineqlin.marginals)
    # with y <= 0: s t >= bound + r.x, where s = -sum y and r = -sum y_k row_k
    s_t = Fraction(0)
    r = [Fraction(0)] * n
    bound = Fraction(0)
    for k, yk in enumerate(y):
        if yk >= 0:
            continue
        yk = Fraction(yk)
        s_t -= yk
        bound += yk * rhs[k]
        for j in range(n):
            if rows[k][j]:
                r[j] -= yk * int(round(rows[k][j]))
    lower = bound + sum(min(r[j] * lo[j], r[j] * hi[j]) for j in range(n))
    # lower > 0 forces t > 0 (or is contradictory when s_t = 0)
    return lower <= 0


# --- depth-first enumeration ------------------------------------------------


def enumerate_points(
    sys: IntegerSystem,
    budget: int = 10**8,
    lp_bounds: bool = True,
    lp_depth: int = 2,
    order: Sequence[int] | None = None,
    label: str = "",
) -> list[tuple[int, ...]]:
    """All integer points of ``sys`` inside its box, in lexicographic order."""
    n = sys.nvars
    if n == 0:
        return [()] if sys.satisfied(()) else []
    prop = _Propagator(sys)
    lo = np.array(sys.box_lo, dtype=prop.dtype)
    hi = np.array(sys.box_hi, dtype=prop.dtype)
    if not prop.propagate(lo, hi):
        return []
    if lp_bounds:
        res = safe_lp_box(sys, [int(v) for v in lo], [int(v) for v in hi])
        if res is None:
            return []
        lo = np.array(res[0], dtype=prop.dtype)
        hi = np.array(res[1], dtype=prop.dtype)
        if not prop.propagate(lo, hi):
            return []
    if order is None:
        # smallest domain first, ties by index
        order = sorted(range(n), key=lambda j: (int(hi[j] - lo[j]), j))
    found: list[tuple[int, ...]] = []
    nodes = 0

    def dfs(lo, hi, depth):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError(
                f"{label or 'search'}: node budget {budget} exhausted "
                f"(box {[(int(a), int(b)) for a, b in zip(lo, hi)]})",
                nodes,
            )
        free = [j for j in order if lo[j] != hi[j]]
        if not free:
            x = tuple(int(v) for v in lo)
            if sys.satisfied(x):
                found.append(x)
            return
        if lp_bounds and 0 < depth <= lp_depth:
            res = safe_lp_box(sys, [int(v) for v in lo], [int(v) for v in hi])
            if res is None:
                return
            lo = np.array(res[0], dtype=prop.dtype)
            hi = np.array(res[1], dtype=prop.dtype)
            if not prop.propagate(lo, hi):
                return
            free = [j for j in order if lo[j] != hi[j]]
            if not free:
                dfs(lo, hi, depth + 1)
                return
        j = free[0]
        for v in range(int(lo[j]), int(hi[j]) + 1):
            nlo, nhi = lo.copy(), hi.copy()
            nlo[j] = nhi[j] = v
            if prop.propagate(nlo, nhi):
                dfs(nlo, nhi, depth + 1)

    dfs(lo, hi, 0)
    log.debug("%s: %d nodes, %d points", label, nodes, len(found))
    return sorted(set(found))
