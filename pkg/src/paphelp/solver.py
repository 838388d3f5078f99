"""Enumeration of virtual partial augmentations and verdicts.

``enumerate_standard`` computes the complete set of arrays X passing the
compiled HeLP constraints for order n.  The rows X[d] with d > 1 are not
free: ``u^p`` is itself a unit of order n/p, so for every prime p | n the
rows (X[p e])_{e | n/p} must form a solution of order n/p.  Once these rows
are fixed the first row is found by an exhaustive integer search.

``enumerate_pap`` does the same for the PAP-adapted method, where only the
partial augmentations Y of u itself are unknown.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomics import divisors, prime_factors
from .engine import (
    EngineError,
    HeLPOptions,
    PAPVector,
    VirtualUnit,
    character_values,
    compile_constraints,
    irr_n,
    mu_class,
    mu_virtual,
    pap_check,
    pap_expand,
    trivial_candidate,
)
from .group_model import CharacterTable, classes_of_order, power_class
from .search import IntegerSystem, ResourceLimitError, enumerate_points

log = logging.getLogger(__name__)

__all__ = [
    "SolverOptions",
    "SolutionSet",
    "OrderReport",
    "AnalysisReport",
    "PAPAssumptionError",
    "ResourceLimitError",
    "bounding_box",
    "enumerate_standard",
    "enumerate_pap",
    "analyze",
    "VERDICT_PROVEN",
    "VERDICT_OPEN",
]

VERDICT_PROVEN = "proven"
VERDICT_OPEN = "open"


class PAPAssumptionError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions(HeLPOptions):
    budget: int = 10**8
    lp_bounds: bool = True
    workers: int = 1

    def engine_options(self) -> HeLPOptions:
        return HeLPOptions(self.use_brauer, self.use_cl_congruences, self.use_folklore_congruences)

    def describe(self) -> dict:
        doc = super().describe()
        doc["budget"] = self.budget
        return doc


@dataclass
class SolutionSet:
    n: int
    kind: str  # "standard" or "pap"
    members: list
    is_trivial: list[bool] = field(default_factory=list)
    all_nonnegative: list[bool] = field(default_factory=list)
    pap_ok: list[bool] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return item in self.members

    def nontrivial(self) -> list:
        return [m for m, t in zip(self.members, self.is_trivial) if not t]


def bounding_box(table: CharacterTable, n: int) -> dict[int, tuple[int, int]]:
    """Interval for X[1][C] over the live classes C (element order | n, C != 1).

    From the degree identity |sum_C X[1][C] chi(C)| <= chi(1) and column
    orthogonality, |X[1][C]| <= |C|/|G| sum_chi chi(1) |chi(C)| <= |C|.
    """
    out = {}
    for c in table.classes[1:]:
        if n % c.element_order == 0:
            out[c.id] = (-c.size, c.size)
    return out


def _flags(table: CharacterTable, sols: SolutionSet) -> None:
    trivial = set()
    for c in table.classes:
        if c.element_order == sols.n:
            t = trivial_candidate(table, c.id)
            trivial.add(t.key() if sols.kind == "standard" else t.rows[1])
    for m in sols.members:
        key = m.key() if sols.kind == "standard" else m.values
        sols.is_trivial.append(key in trivial)
        sols.all_nonnegative.append(m.all_nonnegative())
        if sols.kind == "standard":
            sols.pap_ok.append(pap_check(table, m).ok)
        else:
            sols.pap_ok.append(True)


def _coherent_rows(table: CharacterTable, n: int, lower: dict[int, SolutionSet]):
    """All assignments of the rows X[d], d > 1, coherent with lower solutions."""
    primes = sorted(set(prime_factors(n)))
    pools = [lower[n // p].members for p in primes]
    for choice in itertools.product(*pools):
        rows: dict[int, tuple[int, ...]] = {}
        ok = True
        for p, S in zip(primes, choice):
            for e, row in S.rows.items():
                d = p * e
                if rows.setdefault(d, row) != row:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield rows


def _first_row_system(system, table, n, fixed_rows, brute_box=False) -> tuple[IntegerSystem, list[int]]:
    """Substitute the fixed rows; the unknowns are X[1][C] for live C."""
    first = [i for i, (d, _) in enumerate(system.variables) if d == 1]
    classes = [system.variables[i][1] for i in first]
    fixed = {i: fixed_rows[d][c] for i, (d, c) in enumerate(system.variables) if d != 1}
    A, b, lo, hi = [], [], [], []

    def split(row):
        const = row.const + sum(row.coeffs[i] * v for i, v in fixed.items() if row.coeffs[i])
        return [row.coeffs[i] for i in first], const

    for ineq in system.inequalities:
        a, c0 = split(ineq.row)
        A.append(a)
        b.append(c0)
        lo.append(0)
        hi.append(ineq.upper)
    cong = []
    for ineq in system.inequalities:
        a, c0 = split(ineq.row)
        cong.append((a, c0, ineq.modulus))
    for eq in system.equalities:
        a, c0 = split(eq)
        if any(a):
            A.append(a)
            b.append(c0)
            lo.append(0)
            hi.append(0)
        elif c0:
            return None, classes
    for cg in system.congruences:
        a, c0 = split(cg.row)
        if any(a):
            cong.append((a, c0, cg.modulus))
        elif c0 % cg.modulus:
            return None, classes
    box = bounding_box(table, n)
    sys = IntegerSystem(
        A=A,
        b=b,
        lo=lo,
        hi=hi,
        box_lo=[box[c][0] for c in classes],
        box_hi=[box[c][1] for c in classes],
        congruences=cong,
    )
    return sys, classes


def _solve_chunk(args):
    sys, budget, lp_bounds, label = args
    return enumerate_points(sys, budget=budget, lp_bounds=lp_bounds, label=label)


def _points(sys, options: SolverOptions, label: str):
    if options.workers <= 1 or sys.nvars == 0:
        return enumerate_points(sys, budget=options.budget, lp_bounds=options.lp_bounds, label=label)
    # split on the first variable's domain
    j = min(range(sys.nvars), key=lambda k: (sys.box_hi[k] - sys.box_lo[k], k))
    chunks = []
    for v in range(sys.box_lo[j], sys.box_hi[j] + 1):
        lo, hi = list(sys.box_lo), list(sys.box_hi)
        lo[j] = hi[j] = v
        sub = IntegerSystem(sys.A, sys.b, sys.lo, sys.hi, lo, hi, sys.congruences)
        chunks.append((sub, options.budget, options.lp_bounds, f"{label} x{j}={v}"))
    with ProcessPoolExecutor(max_workers=options.workers) as pool:
        parts = list(pool.map(_solve_chunk, chunks))
    return sorted(set(p for part in parts for p in part))


def enumerate_standard(
    table: CharacterTable,
    n: int,
    options: SolverOptions | None = None,
    cache: dict | None = None,
) -> SolutionSet:
    options = options or SolverOptions()
    if table.exponent % n:
        raise EngineError(f"order {n} does not divide the exponent {table.exponent}: impossible")
    cache = {} if cache is None else cache
    if ("standard", n) in cache:
        return cache[("standard", n)]
    r = table.num_classes
    if n == 1:
        ident = VirtualUnit(1, {1: tuple(1 if c == 0 else 0 for c in range(r))})
        sols = SolutionSet(1, "standard", [ident])
        _flags(table, sols)
        cache[("standard", 1)] = sols
        return sols
    lower = {}
    for p in sorted(set(prime_factors(n))):
        lower[n // p] = enumerate_standard(table, n // p, options, cache)
    system = compile_constraints(table, n, options.engine_options())
    found = set()
    for fixed in _coherent_rows(table, n, lower):
        fixed = dict(fixed)
        isys, classes = _first_row_system(system, table, n, fixed)
        if isys is None:
            continue
        label = f"{table.name} n={n}"
        for point in _points(isys, options, label):
            first = [0] * r
            for c, v in zip(classes, point):
                first[c] = v
            rows = dict(fixed)
            rows[1] = tuple(first)
            found.add(VirtualUnit(n, rows))
    members = sorted(found)
    # post-hoc re-check through the direct multiplicity formula
    for X in members:
        X.validate(table)
        _recheck_standard(table, X, options)
        bad = system.violations(X)
        if bad:
            raise AssertionError(f"solution violates {bad[:3]}")
    sols = SolutionSet(n, "standard", members)
    _flags(table, sols)
    cache[("standard", n)] = sols
    return sols


def _recheck_standard(table, X: VirtualUnit, options: SolverOptions) -> None:
    for chi in irr_n(table, X.n, options.use_brauer):
        for j in range(X.n):
            mu = mu_virtual(table, chi, X, j)
            if mu < 0 or mu.denominator != 1:
                raise AssertionError(f"{chi.label()} xi^{j}: multiplicity {mu} for {X}")


def _cl_ok(table: CharacterTable, X: VirtualUnit) -> bool:
    fs = set(prime_factors(X.n))
    if len(fs) != 1:
        return True
    p = fs.pop()
    for d, row in X.rows.items():
        m = X.n // d
        pk = p
        while m % pk == 0:
            s = sum(row[c] for c in classes_of_order(table, pk))
            if (s - (1 if pk == m else 0)) % p:
                return False
            pk *= p
    return True


def enumerate_pap(
    table: CharacterTable,
    n: int,
    options: SolverOptions | None = None,
    acknowledge: bool = False,
) -> SolutionSet:
    """All Y with sum_C Y_C mu(chi, C, xi) >= 0 for chi in IRR_n, xi in mu_n."""
    options = options or SolverOptions()
    if not (table.pap_assumed or acknowledge):
        raise PAPAssumptionError(
            f"{table.name}: the adapted method is only valid for units with the PAP "
            "property; set pap_assumed in the table or acknowledge the assumption"
        )
    if table.exponent % n:
        raise EngineError(f"order {n} does not divide the exponent {table.exponent}: impossible")
    r = table.num_classes
    live = [c.id for c in table.classes[1:] if n % c.element_order == 0]
    chars = irr_n(table, n, options.use_brauer)
    A, b, lo, hi = [], [], [], []
    seen = set()
    for chi in chars:
        degree = int(character_values(table, chi)[0].to_rational())
        for j in range(n):
            coeffs = []
            for c in live:
                mu = mu_class(table, chi, c, j, n)
                if mu.denominator != 1:
                    raise AssertionError(f"non-integral multiplicity {mu} at class {c}")
                coeffs.append(int(mu))
            if tuple(coeffs) in seen:
                continue
            seen.add(tuple(coeffs))
            A.append(coeffs)
            b.append(0)
            lo.append(0)
            hi.append(degree)
    if n > 1:
        A.append([1] * len(live))
        b.append(-1)
        lo.append(0)
        hi.append(0)
        # X(Y) must lie in Z_n(G): the powers u^d, d < n, have zero
        # partial augmentation at the identity.
        for d in divisors(n)[1:-1]:
            row = [1 if d % table.classes[c].element_order == 0 else 0 for c in live]
            if any(row):
                A.append(row)
                b.append(0)
                lo.append(0)
                hi.append(0)
        box = bounding_box(table, n)
        sys = IntegerSystem(
            A, b, lo, hi, [box[c][0] for c in live], [box[c][1] for c in live]
        )
        points = _points(sys, options, f"{table.name} n={n} (PAP)")
    else:
        points = [()]
    members = []
    for point in points:
        vals = [0] * r
        if n == 1:
            vals[0] = 1
        for c, v in zip(live, point):
            vals[c] = v
        Y = PAPVector(n, tuple(vals))
        if options.use_cl_congruences and not _cl_ok(table, pap_expand(table, Y)):
            continue
        members.append(Y)
    members.sort()
    for Y in members:
        Y.validate(table)
    sols = SolutionSet(n, "pap", members)
    _flags(table, sols)
    return sols


# --- analysis -----------------------------------------------------------


@dataclass
class OrderReport:
    n: int
    solutions: SolutionSet | None
    zc_by_help: str = VERDICT_OPEN
    pap_by_help: str | None = None
    genbp: str | None = None
    order_excluded: bool = False
    group_has_order: bool = False
    error: str | None = None
    pap_violations: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.solutions) if self.solutions is not None else 0


@dataclass
class AnalysisReport:
    table: CharacterTable
    method: str
    options: SolverOptions
    orders: list[OrderReport]
    provenance: dict = field(default_factory=dict)

    def order(self, n: int) -> OrderReport:
        for o in self.orders:
            if o.n == n:
                return o
        raise KeyError(n)

    def unit_spectrum(self) -> list[int]:
        """Orders not excluded by the method (resource failures count as possible)."""
        return sorted(o.n for o in self.orders if o.error or o.count)

    def spectrum_summary(self) -> dict:
        group = sorted(self.table.spectrum)
        extra = [o.n for o in self.orders if (o.error or o.count) and not o.group_has_order]
        checked = {o.n for o in self.orders}
        unchecked = [n for n in divisors(self.table.exponent) if n not in checked]
        return {
            "group_spectrum": group,
            "unit_spectrum": self.unit_spectrum(),
            "orders_not_excluded": extra,
            "unchecked_orders": unchecked,
            "verdict": VERDICT_PROVEN if not extra and not unchecked else VERDICT_OPEN,
        }

    def prime_graph_summary(self) -> dict:
        primes = sorted(set(prime_factors(self.table.order)))
        group_edges, unit_edges, unknown = [], [], []
        checked = {o.n: o for o in self.orders}
        for p, q in itertools.combinations(primes, 2):
            pq = p * q
            if pq in self.table.spectrum:
                group_edges.append([p, q])
            o = checked.get(pq)
            if self.table.exponent % pq:
                continue
            if o is None:
                unknown.append([p, q])
            elif o.error or o.count:
                unit_edges.append([p, q])
        return {
            "primes": primes,
            "group_edges": group_edges,
            "unit_edges": unit_edges,
            "unchecked_edges": unknown,
            "verdict": VERDICT_PROVEN if unit_edges == group_edges and not unknown else VERDICT_OPEN,
        }


def _order_verdicts(table: CharacterTable, rep: OrderReport, kind: str) -> None:
    sols = rep.solutions
    rep.zc_by_help = VERDICT_PROVEN if all(sols.all_nonnegative) else VERDICT_OPEN
    if kind == "standard":
        rep.pap_by_help = VERDICT_PROVEN if all(sols.pap_ok) else VERDICT_OPEN
        for X, ok in zip(sols.members, sols.pap_ok):
            if not ok:
                rep.pap_violations.append((X, pap_check(table, X).violations))
    else:
        rep.pap_by_help = None
    n = rep.n
    good = True
    for m in sols.members:
        first = m.first_row()
        by_order: dict[int, int] = {}
        for c, x in enumerate(first):
            by_order[table.classes[c].element_order] = by_order.get(table.classes[c].element_order, 0) + x
        if any(v for o, v in by_order.items() if o != n):
            good = False
    rep.genbp = "holds" if good else "violated"
    rep.order_excluded = not sols.members and not rep.group_has_order


def analyze(
    table: CharacterTable,
    orders: Iterable[int] | str = "all",
    options: SolverOptions | None = None,
    pap: bool = False,
    acknowledge_pap: bool = False,
) -> AnalysisReport:
    options = options or SolverOptions()
    sweep = orders == "all"
    if sweep:
        orders = list(divisors(table.exponent))
    orders = sorted(set(int(n) for n in orders))
    cache: dict = {}
    reports = []
    provenance = {}
    for n in orders:
        rep = OrderReport(n, None, group_has_order=n in table.spectrum)
        if table.exponent % n:
            rep.error = None
            rep.solutions = SolutionSet(n, "pap" if pap else "standard", [])
            rep.order_excluded = not rep.group_has_order
            rep.zc_by_help = VERDICT_PROVEN
            rep.genbp = "holds"
            rep.pap_by_help = None if pap else VERDICT_PROVEN
            provenance[n] = {"excluded_by": "exponent"}
            reports.append(rep)
            continue
        opts = options
        if sweep and options.use_brauer not in (True, False, None):
            # an explicit prime list applies to the orders it is legal for
            opts = replace(options, use_brauer=tuple(p for p in options.use_brauer if n % p))
        try:
            if pap:
                rep.solutions = enumerate_pap(table, n, opts, acknowledge=acknowledge_pap)
            else:
                rep.solutions = enumerate_standard(table, n, opts, cache)
        except ResourceLimitError as exc:
            rep.error = str(exc)
            rep.zc_by_help = VERDICT_OPEN
            reports.append(rep)
            continue
        _order_verdicts(table, rep, "pap" if pap else "standard")
        if n > 1:
            chars = irr_n(table, n, opts.use_brauer)
            provenance[n] = {
                "characters": len(chars),
                "brauer_primes": sorted({c.prime for c in chars if c.prime}),
            }
        reports.append(rep)
    return AnalysisReport(table, "pap" if pap else "standard", options, reports, provenance)
