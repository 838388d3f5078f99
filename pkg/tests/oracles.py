"""Independent reference implementations used by the tests.

Nothing here goes through the constraint compiler, the trace tables or the
integer search of the package; values are evaluated in complex floating
point straight from the defining sums and rounded at the end.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

from paphelp.engine import VirtualUnit
from paphelp.group_model import CharacterTable, power_class


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def complex_values(table: CharacterTable, prime: int, index: int) -> np.ndarray:
    if prime == 0:
        vals = table.characters[index]
        return np.array([complex(v) for v in vals])
    block = table.brauer[prime]
    out = np.zeros(table.num_classes, dtype=complex)
    for c, v in zip(block.regular_classes, block.characters[index]):
        out[c] = complex(v)
    return out


def characters_for(table: CharacterTable, n: int, use_brauer: bool = True):
    chars = [(0, i) for i in range(len(table.characters))]
    if use_brauer:
        for p in sorted(table.brauer):
            if n % p and table.order % p == 0:
                chars += [(p, i) for i in range(len(table.brauer[p].characters))]
    return chars


def float_trace_matrix(table: CharacterTable, chi: tuple[int, int], n: int) -> dict:
    """T[(d, C)][j] = Tr_{Q(zeta_{n/d})/Q}(chi(C) zeta_n^{-j d}) as complex floats.

    The trace is the sum over k coprime to m = n/d of sigma_k, and
    sigma_k(chi(C)) = chi(C^k) for classes of order dividing m.
    """
    vals = complex_values(table, *chi)
    out = {}
    for d in divisors(n):
        m = n // d
        units = [k for k in range(1, m + 1) if math.gcd(k, m) == 1]
        for c in range(table.num_classes):
            if m % table.classes[c].element_order:
                continue
            row = []
            for j in range(n):
                s = 0j
                for k in units:
                    s += vals[power_class(table, c, k)] * cmath.exp(-2j * math.pi * j * d * k / n)
                row.append(s)
            out[(d, c)] = np.array(row)
    return out


def float_mu(table: CharacterTable, chi, X: VirtualUnit, j: int) -> complex:
    T = float_trace_matrix(table, chi, X.n)
    total = 0j
    for d, row in X.rows.items():
        for c, x in enumerate(row):
            if x:
                total += T[(d, c)][j] * x
    return total / X.n


def _rows_from_lower(n: int, lower: dict[int, list[VirtualUnit]]):
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    for choice in itertools.product(*[lower[n // p] for p in primes]):
        rows = {}
        ok = True
        for p, S in zip(primes, choice):
            for e, r in S.rows.items():
                if rows.setdefault(p * e, r) != r:
                    ok = False
        if ok:
            yield rows


def brute_force(table: CharacterTable, n: int, use_brauer: bool = True, memo: dict | None = None) -> set:
    """VPA_n with power-coherent rows, by scanning the full box |X_1C| <= |C|."""
    memo = {} if memo is None else memo
    if n in memo:
        return memo[n]
    r = table.num_classes
    if n == 1:
        res = {VirtualUnit(1, {1: tuple([1] + [0] * (r - 1))})}
        memo[1] = res
        return res
    lower = {}
    for p in range(2, n + 1):
        if n % p == 0 and all(p % q for q in range(2, p)):
            lower[n // p] = sorted(brute_force(table, n // p, use_brauer, memo))
    live = [c.id for c in table.classes[1:] if n % c.element_order == 0]
    ranges = [np.arange(-table.classes[c].size, table.classes[c].size + 1) for c in live]
    grid = np.array(np.meshgrid(*ranges, indexing="ij")).reshape(len(live), -1).T
    grid = grid[grid.sum(axis=1) == 1]
    chars = characters_for(table, n, use_brauer)
    traces = {chi: float_trace_matrix(table, chi, n) for chi in chars}
    degrees = {chi: complex_values(table, *chi)[0].real for chi in chars}
    found = set()
    for rows in _rows_from_lower(n, lower):
        keep = np.ones(len(grid), dtype=bool)
        for chi in chars:
            T = traces[chi]
            M = np.array([T[(1, c)] for c in live]).T  # n x live
            const = np.zeros(n, dtype=complex)
            for d, row in rows.items():
                for c, x in enumerate(row):
                    if x:
                        const += T[(d, c)] * x
            mu = (grid @ M.T + const) / n
            near = np.abs(mu - np.round(mu.real)) < 1e-6
            rounded = np.round(mu.real)
            ok = near & (rounded >= 0) & (rounded <= degrees[chi] + 1e-9)
            keep &= ok.all(axis=1)
        for point in grid[keep]:
            first = [0] * r
            for c, v in zip(live, point):
                first[c] = int(v)
            all_rows = dict(rows)
            all_rows[1] = tuple(first)
            all_rows[n] = tuple([1] + [0] * (r - 1))
            found.add(VirtualUnit(n, all_rows))
    memo[n] = found
    return found


def cyclic_power_convolution(coeffs: dict[int, int], k: int, m: int) -> list[int]:
    """Coefficients of (sum c_i x^i)^k modulo x^m - 1."""
    poly = [0] * m
    for i, c in coeffs.items():
        poly[i % m] += c
    out = [1] + [0] * (m - 1)
    for _ in range(k):
        nxt = [0] * m
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(poly):
                    if b:
                        nxt[(i + j) % m] += a * b
        out = nxt
    return out
