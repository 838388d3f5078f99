"""Eigenvalue multiplicities and the constraint systems of the HeLP method.

For a hypothetical torsion unit ``u`` of order ``n`` the unknowns are the
partial augmentations ``X[d][C]`` of the powers ``u^d`` (``d | n``).  The
multiplicity of the eigenvalue ``xi`` of ``rho(u)``, for a representation
with character ``chi``, is

    mu(chi, X, xi) = 1/n * sum_{d | n} sum_C Tr_{Q(zeta_{n/d})/Q}(chi(C) xi^-d) X[d][C]

and must be a nonnegative integer.  The inner sum only runs over classes
whose element order divides ``n/d``; all other entries are forced to zero,
which also makes every trace argument lie in ``Q(zeta_{n/d})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomics import Cyclotomic, _ramanujan_sum, divisors, euler_phi, prime_factors, zeta
from .group_model import CharacterTable, power_class

__all__ = [
    "Char",
    "VirtualUnit",
    "PAPVector",
    "PAPCheck",
    "Row",
    "Inequality",
    "Congruence",
    "ConstraintSystem",
    "HeLPOptions",
    "EngineError",
    "irr_n",
    "character_values",
    "root_exponent",
    "trace_coefficients",
    "mu_virtual",
    "mu_class",
    "trivial_candidate",
    "compile_constraints",
    "pap_check",
    "pap_expand",
    "mu_of_expansion",
]


class EngineError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Char:
    """An ordinary (``prime == 0``) or p-Brauer irreducible character."""

    prime: int
    index: int

    @property
    def is_ordinary(self) -> bool:
        return self.prime == 0

    def label(self) -> str:
        return f"chi{self.index}" if self.prime == 0 else f"phi{self.index}[p={self.prime}]"


def ordinary(index: int) -> Char:
    return Char(0, index)


def character_values(table: CharacterTable, chi: Char) -> tuple[Cyclotomic, ...]:
    if chi.is_ordinary:
        return table.characters[chi.index]
    key = ("brauer_values", chi)
    if key not in table._cache:
        table._cache[key] = tuple(table.brauer_character_values(chi.prime, chi.index))
    return table._cache[key]


def _brauer_primes(table: CharacterTable, n: int, use_brauer) -> list[int]:
    if use_brauer is False or use_brauer is None:
        return []
    allowed = set(table.brauer) if use_brauer is True else set(use_brauer)
    for p in allowed:
        if n % p == 0:
            raise EngineError(f"Brauer prime {p} divides the unit order {n}")
        if p not in table.brauer:
            raise EngineError(f"table {table.name!r} has no {p}-Brauer characters")
    return sorted(p for p in allowed if table.order % p == 0 and n % p)


def irr_n(table: CharacterTable, n: int, use_brauer=True) -> list[Char]:
    """Ordinary characters plus the p-Brauer characters usable for order n.

    ``use_brauer`` is True (every block present whose prime does not divide
    n), False, or an explicit collection of primes.
    """
    chars = [Char(0, i) for i in range(len(table.characters))]
    if use_brauer is True:
        primes = sorted(p for p in table.brauer if table.order % p == 0 and n % p)
    else:
        primes = _brauer_primes(table, n, use_brauer)
    for p in primes:
        chars.extend(Char(p, i) for i in range(len(table.brauer[p].characters)))
    return chars


def root_exponent(xi, n: int) -> int:
    """The j with xi = zeta_n^j; accepts an int exponent or a Cyclotomic."""
    if isinstance(xi, int):
        return xi % n
    for j in range(n):
        if xi == zeta(n, j):
            return j
    raise EngineError(f"{xi!r} is not an {n}-th root of unity")


def _trace_against_roots(value: Cyclotomic, m: int) -> tuple[Fraction, ...]:
    """Tr_{Q(zeta_m)/Q}(value * zeta_m^-j) for j = 0..m-1."""
    if not value.lies_in(m):
        raise EngineError(f"character value of conductor {value.conductor} not in Q(zeta_{m})")
    big = math.lcm(value.conductor, m)
    lifted = value.lift(big)
    step = big // m
    out = []
    for j in range(m):
        # zeta_m^-j = zeta_big^(-j*step); trace over Q(zeta_big) is phi(big)/phi(m) times ours
        s = sum(
            (c * _ramanujan_sum(big, e - j * step) for e, c in lifted.coeffs.items()),
            Fraction(0),
        )
        t = s * euler_phi(m) / euler_phi(big)
        # traces of algebraic integers are rational integers
        out.append(int(t) if t.denominator == 1 else t)
    return tuple(out)


def trace_coefficients(table: CharacterTable, chi: Char, n: int) -> dict[tuple[int, int], tuple[Fraction, ...]]:
    """Map (d, C) -> (T_j) with T_j = Tr_{Q(zeta_{n/d})/Q}(chi(C) zeta_n^(-j d)).

    Only pairs where the element order of C divides n/d are present.
    """
    key = ("trace", chi, n)
    cached = table._cache.get(key)
    if cached is not None:
        return cached
    values = character_values(table, chi)
    out = {}
    for d in divisors(n):
        m = n // d
        for c in table.classes:
            if m % c.element_order:
                continue
            t_m = _trace_against_roots(values[c.id], m)
            # zeta_n^(-j d) = zeta_m^(-j)
            out[(d, c.id)] = tuple(t_m[j % m] for j in range(n))
    table._cache[key] = out
    return out


# --- domain types ----------------------------------------------------------


@dataclass(frozen=True)
class VirtualUnit:
    """Candidate partial augmentations X[d][C] of the powers u^d."""

    n: int
    rows: dict[int, tuple[int, ...]]

    def __post_init__(self):
        object.__setattr__(self, "rows", {d: tuple(self.rows[d]) for d in sorted(self.rows)})

    def entry(self, d: int, c: int) -> int:
        return self.rows[d][c]

    def key(self) -> tuple:
        return tuple(x for d in sorted(self.rows) for x in self.rows[d])

    def __hash__(self):
        return hash((self.n, self.key()))

    def __eq__(self, other):
        return isinstance(other, VirtualUnit) and self.n == other.n and self.key() == other.key()

    def __lt__(self, other):
        return (self.n, self.key()) < (other.n, other.key())

    def first_row(self) -> tuple[int, ...]:
        return self.rows[1]

    def all_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.rows.values() for x in row)

    def validate(self, table: CharacterTable) -> None:
        n = self.n
        if sorted(self.rows) != list(divisors(n)):
            raise EngineError(f"rows must be indexed by the divisors of {n}")
        for d, row in self.rows.items():
            if len(row) != table.num_classes:
                raise EngineError(f"row {d}: wrong length")
            if sum(row) != 1:
                raise EngineError(f"row {d} does not sum to 1")
            for c in table.classes:
                x = row[c.id]
                if d == n:
                    if x != (1 if c.id == 0 else 0):
                        raise EngineError(f"row {n} must be the identity indicator")
                elif x and (c.id == 0 or (n // d) % c.element_order):
                    raise EngineError(f"entry ({d}, {c.name}) must vanish")

    def to_json(self, table: CharacterTable) -> dict:
        names = table.class_names()
        return {
            "n": self.n,
            "rows": {
                str(d): {names[c]: x for c, x in enumerate(row) if x}
                for d, row in self.rows.items()
            },
        }

    @classmethod
    def from_json(cls, doc: dict, table: CharacterTable) -> "VirtualUnit":
        rows = {}
        for d, entries in doc["rows"].items():
            row = [0] * table.num_classes
            for name, x in entries.items():
                row[table.class_by_name(name)] = int(x)
            rows[int(d)] = tuple(row)
        return cls(int(doc["n"]), rows)


@dataclass(frozen=True)
class PAPVector:
    """Partial augmentations (Y_C) of a unit of order n with the PAP property."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __lt__(self, other):
        return (self.n, self.values) < (other.n, other.values)

    def all_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.values)

    def first_row(self) -> tuple[int, ...]:
        return self.values

    def key(self) -> tuple:
        return self.values

    def validate(self, table: CharacterTable) -> None:
        if len(self.values) != table.num_classes:
            raise EngineError("wrong number of entries")
        if sum(self.values) != 1:
            raise EngineError("entries do not sum to 1")
        for c in table.classes:
            if self.values[c.id] and ((c.id == 0 and self.n > 1) or self.n % c.element_order):
                raise EngineError(f"entry at {c.name} must vanish")

    def to_json(self, table: CharacterTable) -> dict:
        names = table.class_names()
        return {"n": self.n, "values": {names[c]: x for c, x in enumerate(self.values) if x}}

    @classmethod
    def from_json(cls, doc: dict, table: CharacterTable) -> "PAPVector":
        vals = [0] * table.num_classes
        for name, x in doc["values"].items():
            vals[table.class_by_name(name)] = int(x)
        return cls(int(doc["n"]), tuple(vals))


# --- multiplicities --------------------------------------------------------


def _check_char(table: CharacterTable, chi: Char, n: int) -> None:
    if chi.is_ordinary:
        if not 0 <= chi.index < len(table.characters):
            raise EngineError(f"no ordinary character {chi.index}")
        return
    if chi.prime not in table.brauer:
        raise EngineError(f"table {table.name!r} has no {chi.prime}-Brauer characters")
    if n % chi.prime == 0:
        raise EngineError(f"{chi.prime}-Brauer characters cannot be used for order {n}")


def mu_virtual(table: CharacterTable, chi: Char, X: VirtualUnit, xi) -> Fraction:
    n = X.n
    _check_char(table, chi, n)
    j = root_exponent(xi, n)
    coeffs = trace_coefficients(table, chi, n)
    total = 0
    for d, row in X.rows.items():
        for c, x in enumerate(row):
            if x:
                t = coeffs.get((d, c))
                if t is None:
                    raise EngineError(f"entry ({d}, {table.classes[c].name}) must vanish")
                total += t[j] * x
    return Fraction(total) / n


def mu_class(table: CharacterTable, chi: Char, c: int, xi, n: int) -> Fraction:
    """Multiplicity of xi as eigenvalue of an element of class c (order dividing n)."""
    _check_char(table, chi, n)
    if n % table.classes[c].element_order:
        raise EngineError(f"element order of {table.classes[c].name} does not divide {n}")
    j = root_exponent(xi, n)
    key = ("mu_class", chi, n, c)
    row = table._cache.get(key)
    if row is None:
        coeffs = trace_coefficients(table, chi, n)
        cols = [coeffs[(d, power_class(table, c, d))] for d in divisors(n)]
        row = tuple(Fraction(sum(col[i] for col in cols), n) for i in range(n))
        table._cache[key] = row
    return row[j]


def trivial_candidate(table: CharacterTable, g: int) -> VirtualUnit:
    n = table.classes[g].element_order
    rows = {}
    for d in divisors(n):
        row = [0] * table.num_classes
        row[power_class(table, g, d)] = 1
        rows[d] = tuple(row)
    return VirtualUnit(n, rows)


# --- PAP -----------------------------------------------------------------


@dataclass(frozen=True)
class PAPCheck:
    ok: bool
    # (d, class id, sum of X[1][D] over D^d = C, X[d][C])
    violations: tuple[tuple[int, int, int, int], ...]

    def __bool__(self):
        return self.ok


def pap_check(table: CharacterTable, X: VirtualUnit) -> PAPCheck:
    """Check X[d][C] = sum_{D^d = C} X[1][D] for every divisor d of n."""
    first = X.rows[1]
    bad = []
    for d in divisors(X.n):
        pushed = [0] * table.num_classes
        for D, x in enumerate(first):
            if x:
                pushed[power_class(table, D, d)] += x
        for c in range(table.num_classes):
            if pushed[c] != X.rows[d][c]:
                bad.append((d, c, pushed[c], X.rows[d][c]))
    return PAPCheck(not bad, tuple(bad))


def pap_expand(table: CharacterTable, Y: PAPVector) -> VirtualUnit:
    rows = {}
    for d in divisors(Y.n):
        row = [0] * table.num_classes
        for D, y in enumerate(Y.values):
            if y:
                row[power_class(table, D, d)] += y
        rows[d] = tuple(row)
    return VirtualUnit(Y.n, rows)


def mu_of_expansion(table: CharacterTable, chi: Char, Y: PAPVector, xi) -> Fraction:
    return sum(
        (y * mu_class(table, chi, c, xi, Y.n) for c, y in enumerate(Y.values) if y),
        Fraction(0),
    )


# --- constraint systems ----------------------------------------------------


@dataclass(frozen=True)
class HeLPOptions:
    use_brauer: object = True
    use_cl_congruences: bool = True
    use_folklore_congruences: bool = True

    def describe(self) -> dict:
        ub = self.use_brauer
        return {
            "brauer": ub if isinstance(ub, bool) else sorted(ub),
            "cohn_livingstone_congruences": self.use_cl_congruences,
            "folklore_congruences": self.use_folklore_congruences,
        }


@dataclass(frozen=True)
class Row:
    """Integer linear form ``coeffs . x + const`` over the live variables."""

    coeffs: tuple[int, ...]
    const: int
    tag: str

    def value(self, x: Sequence[int]) -> int:
        return sum(a * v for a, v in zip(self.coeffs, x)) + self.const


@dataclass(frozen=True)
class Inequality:
    # 0 <= row <= upper and row = 0 mod modulus
    row: Row
    upper: int
    modulus: int


@dataclass(frozen=True)
class Congruence:
    row: Row
    modulus: int


@dataclass
class ConstraintSystem:
    table: CharacterTable
    n: int
    options: HeLPOptions
    characters: list[Char]
    variables: list[tuple[int, int]]
    inequalities: list[Inequality] = field(default_factory=list)
    equalities: list[Row] = field(default_factory=list)
    congruences: list[Congruence] = field(default_factory=list)
    # multiplicity rows before duplicates were dropped
    raw_inequalities: int = 0

    def index(self) -> dict[tuple[int, int], int]:
        return {v: i for i, v in enumerate(self.variables)}

    def assignment(self, X: VirtualUnit) -> list[int]:
        return [X.rows[d][c] for d, c in self.variables]

    def violations(self, X: VirtualUnit) -> list[str]:
        """Tags of all rows violated by X (X must respect the forced zeros)."""
        x = self.assignment(X)
        bad = []
        for ineq in self.inequalities:
            v = ineq.row.value(x)
            if v < 0 or v > ineq.upper or v % ineq.modulus:
                bad.append(ineq.row.tag)
        for eq in self.equalities:
            if eq.value(x) != 0:
                bad.append(eq.tag)
        for cong in self.congruences:
            if cong.row.value(x) % cong.modulus:
                bad.append(cong.row.tag)
        return bad

    def provenance(self) -> dict:
        kinds: dict[str, int] = {}
        for ineq in self.inequalities:
            kinds["multiplicity"] = kinds.get("multiplicity", 0) + 1
        for cong in self.congruences:
            k = cong.row.tag.split(" ")[0]
            kinds[k] = kinds.get(k, 0) + 1
        return {
            "characters": [c.label() for c in self.characters],
            "brauer_primes": sorted({c.prime for c in self.characters if c.prime}),
            "rows": kinds,
            "raw_multiplicity_rows": self.raw_inequalities,
        }


def live_variables(table: CharacterTable, n: int) -> list[tuple[int, int]]:
    """(d, C) pairs not forced to zero, ordered by divisor then class."""
    out = []
    for d in divisors(n):
        if d == n:
            continue
        m = n // d
        for c in table.classes[1:]:
            if m % c.element_order == 0:
                out.append((d, c.id))
    return out


def _integer_row(coeffs: Sequence[Fraction], const: Fraction) -> tuple[list[int], int, int]:
    scale = math.lcm(*(Fraction(a).denominator for a in list(coeffs) + [const]))
    return [int(a * scale) for a in coeffs], int(const * scale), scale


def compile_constraints(table: CharacterTable, n: int, options: HeLPOptions | None = None) -> ConstraintSystem:
    options = options or HeLPOptions()
    if table.exponent % n:
        raise EngineError(f"order {n} does not divide the exponent {table.exponent}")
    chars = irr_n(table, n, options.use_brauer)
    variables = live_variables(table, n)
    system = ConstraintSystem(table, n, options, chars, variables)
    seen = set()
    for chi in chars:
        tc = trace_coefficients(table, chi, n)
        degree = character_values(table, chi)[0].to_rational()
        for j in range(n):
            coeffs = [tc[(d, c)][j] for d, c in variables]
            const = tc[(n, 0)][j]
            ints, c0, scale = _integer_row(coeffs, const)
            upper = int(n * degree * scale)
            system.raw_inequalities += 1
            sig = (tuple(ints), c0, upper, n * scale)
            if sig in seen:
                continue
            seen.add(sig)
            row = Row(tuple(ints), c0, f"mu {chi.label()} xi=z{n}^{j}")
            system.inequalities.append(Inequality(row, upper, n * scale))
    index = system.index()
    for d in divisors(n):
        if d == n:
            continue
        coeffs = [1 if vd == d else 0 for vd, _ in variables]
        system.equalities.append(Row(tuple(coeffs), -1, f"rowsum d={d}"))
    if options.use_cl_congruences and len(set(prime_factors(n))) == 1 and n > 1:
        p = prime_factors(n)[0]
        for d in divisors(n):
            if d == n:
                continue
            m = n // d
            k, pk = 1, p
            while m % pk == 0:
                coeffs = [
                    1 if vd == d and table.classes[c].element_order == pk else 0
                    for vd, c in variables
                ]
                target = 1 if pk == m else 0
                system.congruences.append(
                    Congruence(Row(tuple(coeffs), -target, f"cohn-livingstone p={p} k={k} d={d}"), p)
                )
                k, pk = k + 1, pk * p
    if options.use_folklore_congruences:
        for p in sorted(set(prime_factors(n))):
            pk = p
            while n % pk == 0:
                for d in divisors(n // pk):
                    for C in table.classes:
                        if (n // (d * pk)) % C.element_order:
                            continue
                        coeffs = [0] * len(variables)
                        const = 0
                        for D in table.classes:
                            if power_class(table, D.id, pk) != C.id:
                                continue
                            if (d, D.id) in index:
                                coeffs[index[(d, D.id)]] += 1
                        target = (d * pk, C.id)
                        if target in index:
                            coeffs[index[target]] -= 1
                        elif d * pk == n and C.id == 0:
                            const -= 1
                        if not any(coeffs) and const % p == 0:
                            continue
                        system.congruences.append(
                            Congruence(
                                Row(tuple(coeffs), const, f"folklore p^k={pk} d={d} C={C.name}"), p
                            )
                        )
                pk *= p
    return system
