"""Character-table level data for finite groups.

A :class:`CharacterTable` holds the conjugacy classes, the prime power
maps, the ordinary irreducible characters and optionally p-Brauer
characters of a group.  Tables are ingested from JSON documents (see
``load_table``) or built directly for abelian groups.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .cyclotomics import Cyclotomic, CyclotomicError, prime_factors, zeta

__all__ = [
    "ClassInfo",
    "BrauerTable",
    "CharacterTable",
    "TableError",
    "load_table",
    "table_from_dict",
    "table_to_dict",
    "load_fixture",
    "fixture_names",
    "power_class",
    "classes_of_order",
    "build_abelian_table",
    "GroupRingElement",
    "group_ring_power",
]


class TableError(ValueError):
    """Raised when a character table document fails validation."""


@dataclass(frozen=True)
class ClassInfo:
    id: int
    name: str
    element_order: int
    size: int
    centralizer_order: int


@dataclass(frozen=True)
class BrauerTable:
    prime: int
    regular_classes: tuple[int, ...]
    characters: tuple[tuple[Cyclotomic, ...], ...]


@dataclass(frozen=True, eq=False)
class CharacterTable:
    name: str
    order: int
    exponent: int
    classes: tuple[ClassInfo, ...]
    power_maps: dict[int, tuple[int, ...]]
    characters: tuple[tuple[Cyclotomic, ...], ...]
    brauer: dict[int, BrauerTable] = field(default_factory=dict)
    pap_assumed: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_by_name(self, name: str) -> int:
        for c in self.classes:
            if c.name == name:
                return c.id
        raise KeyError(name)

    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    def element_order(self, c: int) -> int:
        return self.classes[c].element_order

    @property
    def degrees(self) -> list[int]:
        return [int(row[0].to_rational()) for row in self.characters]

    @cached_property
    def spectrum(self) -> frozenset[int]:
        return frozenset(c.element_order for c in self.classes)

    def brauer_character_values(self, p: int, index: int) -> list[Cyclotomic]:
        """Brauer character extended by zero to p-singular classes."""
        if p not in self.brauer:
            raise KeyError(f"no {p}-Brauer characters in table {self.name!r}")
        block = self.brauer[p]
        values = [Cyclotomic.rational(0)] * self.num_classes
        for c, v in zip(block.regular_classes, block.characters[index]):
            values[c] = v
        return values

    def power(self, c: int, k: int) -> int:
        return power_class(self, c, k)


# --- power maps ------------------------------------------------------------


def _galois_power(table: CharacterTable, c: int, p: int) -> int:
    # for p coprime to the element order, C^p is the class whose character
    # values are the images of those of C under zeta -> zeta^p
    key = ("galois_power", c, p)
    if key in table._cache:
        return table._cache[key]
    m = table.classes[c].element_order
    target = [row[c].galois_on_subfield(p, m) for row in table.characters]
    found = None
    for d in range(table.num_classes):
        if table.classes[d].element_order != table.classes[c].element_order:
            continue
        if all(row[d] == t for row, t in zip(table.characters, target)):
            found = d
            break
    if found is None:
        raise TableError(
            f"class {table.classes[c].name}: no class matches the Galois image under {p}"
        )
    table._cache[key] = found
    return found


def power_class(table: CharacterTable, c: int, k: int) -> int:
    """The class C^k, built from the stored prime power maps."""
    m = table.classes[c].element_order
    k %= m
    if k == 0:
        return 0
    for p in prime_factors(k):
        if table.classes[c].element_order == 1:
            return c
        if p in table.power_maps:
            c = table.power_maps[p][c]
        else:
            c = _galois_power(table, c, p)
    return c


def classes_of_order(table: CharacterTable, m: int) -> list[int]:
    return [c.id for c in table.classes if c.element_order == m]


# --- ingestion and validation ---------------------------------------------


def _parse_values(doc, where: str) -> tuple[Cyclotomic, ...]:
    if not isinstance(doc, list):
        raise TableError(f"{where}: expected a list of values")
    try:
        return tuple(Cyclotomic.from_json(v) for v in doc)
    except CyclotomicError as exc:
        raise TableError(f"{where}: {exc}") from exc


def table_from_dict(doc: dict, validate: bool = True) -> CharacterTable:
    if not isinstance(doc, dict):
        raise TableError("table document must be an object")
    for key in ("name", "order", "exponent", "classes", "power_maps", "characters"):
        if key not in doc:
            raise TableError(f"missing key {key!r}")
    order = doc["order"]
    if not isinstance(order, int) or order < 1:
        raise TableError("order must be a positive integer")
    classes = []
    for i, c in enumerate(doc["classes"]):
        try:
            name, m, size = str(c["name"]), int(c["element_order"]), int(c["size"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TableError(f"class {i}: malformed record") from exc
        if m < 1 or size < 1 or order % size:
            raise TableError(f"class {i} ({name}): invalid order or size")
        classes.append(ClassInfo(i, name, m, size, order // size))
    power_maps = {}
    for key, images in doc["power_maps"].items():
        try:
            p = int(key)
        except ValueError as exc:
            raise TableError(f"power map key {key!r} is not a prime") from exc
        if len(prime_factors(p)) != 1:
            raise TableError(f"power map key {key!r} is not a prime")
        if len(images) != len(classes) or any(
            not isinstance(x, int) or not 0 <= x < len(classes) for x in images
        ):
            raise TableError(f"power map {p}: wrong length or class index out of range")
        power_maps[p] = tuple(images)
    characters = tuple(
        _parse_values(row, f"character {i}") for i, row in enumerate(doc["characters"])
    )
    brauer = {}
    for key, block in (doc.get("brauer") or {}).items():
        p = int(key)
        try:
            regular = tuple(int(x) for x in block["regular_classes"])
            chars = tuple(
                _parse_values(row, f"{p}-Brauer character {i}")
                for i, row in enumerate(block["characters"])
            )
        except (KeyError, TypeError) as exc:
            raise TableError(f"{p}-Brauer block: malformed record") from exc
        brauer[p] = BrauerTable(p, regular, chars)
    table = CharacterTable(
        name=str(doc["name"]),
        order=order,
        exponent=int(doc["exponent"]),
        classes=tuple(classes),
        power_maps=power_maps,
        characters=characters,
        brauer=brauer,
        pap_assumed=bool(doc.get("pap_assumed", False)),
    )
    if validate:
        validate_table(table)
    return table


def load_table(source) -> CharacterTable:
    """Load and validate a table from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        return table_from_dict(source)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TableError(f"cannot read table file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableError(f"{path}: not valid JSON ({exc})") from exc
    return table_from_dict(doc)


def table_to_dict(table: CharacterTable) -> dict:
    doc = {
        "name": table.name,
        "order": table.order,
        "exponent": table.exponent,
        "classes": [
            {"name": c.name, "element_order": c.element_order, "size": c.size}
            for c in table.classes
        ],
        "power_maps": {str(p): list(m) for p, m in sorted(table.power_maps.items())},
        "characters": [[v.to_json() for v in row] for row in table.characters],
        "pap_assumed": table.pap_assumed,
    }
    if table.brauer:
        doc["brauer"] = {
            str(p): {
                "regular_classes": list(b.regular_classes),
                "characters": [[v.to_json() for v in row] for row in b.characters],
            }
            for p, b in sorted(table.brauer.items())
        }
    return doc


def validate_table(table: CharacterTable) -> None:
    """Check every structural invariant; raise TableError naming the culprit."""
    classes = table.classes
    r = len(classes)
    if r == 0:
        raise TableError("table has no classes")
    ident = classes[0]
    if ident.element_order != 1 or ident.size != 1:
        raise TableError("class 0 must be the identity class")
    for c in classes[1:]:
        if c.element_order == 1:
            raise TableError(f"class {c.id} ({c.name}): a second identity class")
    if sum(c.size for c in classes) != table.order:
        raise TableError("class sizes do not sum to the group order")
    orders = [c.element_order for c in classes]
    if table.exponent != math.lcm(*orders):
        raise TableError(f"exponent {table.exponent} != lcm of element orders")
    for c in classes:
        if table.exponent % c.element_order:
            raise TableError(f"class {c.id} ({c.name}): order does not divide the exponent")
    for p in set(prime_factors(table.exponent)):
        if p not in table.power_maps:
            raise TableError(f"missing power map for prime {p}")
    for p, images in table.power_maps.items():
        if images[0] != 0:
            raise TableError(f"power map {p}: identity must map to identity")
        for c in classes:
            d = classes[images[c.id]]
            m = c.element_order
            if d.element_order != m // math.gcd(m, p):
                raise TableError(
                    f"power map {p}: class {c.id} ({c.name}) maps to {d.name} of order "
                    f"{d.element_order}, expected {m // math.gcd(m, p)}"
                )
    chars = table.characters
    if len(chars) != r:
        raise TableError(f"{len(chars)} characters for {r} classes")
    for i, row in enumerate(chars):
        if len(row) != r:
            raise TableError(f"character {i}: {len(row)} values for {r} classes")
        deg = row[0].to_rational()
        if deg is None or deg.denominator != 1 or deg <= 0:
            raise TableError(f"character {i}: degree is not a positive integer")
        for c in classes:
            if c.element_order % row[c.id].conductor:
                # value must lie in Q(zeta_m); allow redundant conductors
                if not row[c.id].lies_in(c.element_order):
                    raise TableError(
                        f"character {i}: value at class {c.id} ({c.name}) not in "
                        f"Q(zeta_{c.element_order})"
                    )
    if sum(int(row[0].to_rational()) ** 2 for row in chars) != table.order:
        raise TableError("sum of squared degrees differs from the group order")
    conj = [[v.conjugate() for v in row] for row in chars]
    for i in range(r):
        for j in range(i, r):
            s = Cyclotomic.rational(0)
            for c in classes:
                s = s + chars[i][c.id] * conj[j][c.id] * c.size
            if s != (table.order if i == j else 0):
                raise TableError(f"first orthogonality fails for characters ({i}, {j})")
    for a in range(r):
        for b in range(a, r):
            s = Cyclotomic.rational(0)
            for i in range(r):
                s = s + chars[i][a] * conj[i][b]
            want = classes[a].centralizer_order if a == b else 0
            if s != want:
                raise TableError(f"column orthogonality fails for classes ({a}, {b})")
    # p-th powers for p coprime to the element order are Galois images
    for p, images in table.power_maps.items():
        for c in classes:
            if c.element_order % p == 0:
                continue
            for i, row in enumerate(chars):
                if row[images[c.id]] != row[c.id].galois_on_subfield(p, c.element_order):
                    raise TableError(
                        f"power map {p}: character {i} is inconsistent at class {c.id} ({c.name})"
                    )
    for p, block in table.brauer.items():
        if table.order % p:
            raise TableError(f"Brauer prime {p} does not divide the group order")
        expected = tuple(c.id for c in classes if c.element_order % p)
        if tuple(block.regular_classes) != expected:
            raise TableError(f"{p}-Brauer block: regular classes must be {list(expected)}")
        if len(block.characters) != len(expected):
            raise TableError(f"{p}-Brauer block: expected {len(expected)} characters")
        for i, row in enumerate(block.characters):
            if len(row) != len(expected):
                raise TableError(f"{p}-Brauer character {i}: wrong number of values")
            deg = row[0].to_rational()
            if deg is None or deg.denominator != 1 or deg <= 0:
                raise TableError(f"{p}-Brauer character {i}: degree is not a positive integer")
    if table.pap_assumed:
        _check_pap_metadata(table)


def _check_pap_metadata(table: CharacterTable) -> None:
    # a normal nilpotent subgroup of prime index gives a linear character of
    # prime order; only that necessary condition is checked
    for row in table.characters:
        if row[0] != 1:
            continue
        for p in set(prime_factors(table.order)):
            if any(v != 1 for v in row) and all(v**p == 1 for v in row):
                warnings.warn(
                    f"{table.name}: pap_assumed accepted; nilpotency of the "
                    "prime-index kernel is not checked",
                    stacklevel=3,
                )
                return
    if table.order == 1:
        return
    raise TableError(
        f"{table.name}: pap_assumed is set but no linear character of prime order exists"
    )


# --- bundled fixtures ------------------------------------------------------


def fixture_names() -> list[str]:
    data = resources.files("paphelp") / "data"
    return sorted(p.name[:-5] for p in data.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> CharacterTable:
    """Load one of the bundled tables, e.g. ``load_fixture("A5")``."""
    key = ("fixture", name)
    if key not in _fixture_cache:
        path = resources.files("paphelp") / "data" / f"{name}.json"
        if not path.is_file():
            raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _fixture_cache[key] = table_from_dict(json.loads(path.read_text()))
    return _fixture_cache[key]


_fixture_cache: dict = {}


# --- abelian groups --------------------------------------------------------


def _abelian_elements(factors: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(f) for f in factors)))


def build_abelian_table(invariant_factors: Sequence[int]) -> CharacterTable:
    """Character table of C_{f1} x ... x C_{fk}.

    Classes are the group elements (exponent tuples) in lexicographic
    order; the characters are indexed the same way, the character of
    index ``a`` sending ``g`` to ``prod zeta_{f_i}^(a_i g_i)``.
    """
    factors = tuple(int(f) for f in invariant_factors)
    if not factors or any(f < 1 for f in factors):
        raise ValueError("invariant factors must be a nonempty list of positive integers")
    elems = _abelian_elements(factors)
    index = {g: i for i, g in enumerate(elems)}
    order = len(elems)
    exponent = math.lcm(*factors)

    def el_order(g):
        return math.lcm(*(f // math.gcd(f, x) for f, x in zip(factors, g)))

    classes = tuple(
        ClassInfo(i, _abelian_class_name(g, el_order(g), i), el_order(g), 1, order)
        for i, g in enumerate(elems)
    )
    power_maps = {
        p: tuple(index[tuple((x * p) % f for f, x in zip(factors, g))] for g in elems)
        for p in sorted(set(prime_factors(exponent)))
    }
    chars = []
    for a in elems:
        row = []
        for g in elems:
            # exponent of zeta_exponent
            e = sum(ai * gi * (exponent // f) for ai, gi, f in zip(a, g, factors))
            row.append(zeta(exponent, e) if exponent > 1 else Cyclotomic.rational(1))
        chars.append(tuple(row))
    name = " x ".join(f"C{f}" for f in factors)
    table = CharacterTable(
        name=name,
        order=order,
        exponent=exponent,
        classes=classes,
        power_maps=power_maps,
        characters=tuple(chars),
        pap_assumed=True,
    )
    table._cache["abelian_factors"] = factors
    return table


def _abelian_class_name(g, m, i) -> str:
    if m == 1:
        return "1a"
    return "g" + ".".join(str(x) for x in g)


# --- group ring elements (abelian groups) ---------------------------------


@dataclass(frozen=True)
class GroupRingElement:
    """Element of Z[A] for the abelian group A given by invariant factors."""

    factors: tuple[int, ...]
    coeffs: dict[tuple[int, ...], int]

    @classmethod
    def from_dict(cls, factors: Iterable[int], coeffs: dict) -> "GroupRingElement":
        factors = tuple(factors)
        clean = {}
        for g, c in coeffs.items():
            g = (g,) if isinstance(g, int) else tuple(g)
            g = tuple(x % f for x, f in zip(g, factors))
            clean[g] = clean.get(g, 0) + c
        return cls(factors, {g: c for g, c in clean.items() if c})

    @classmethod
    def one(cls, factors: Iterable[int]) -> "GroupRingElement":
        factors = tuple(factors)
        return cls(factors, {(0,) * len(factors): 1})

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.factors != other.factors:
            raise ValueError("group ring elements over different groups")
        out: dict[tuple[int, ...], int] = {}
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = tuple((x + y) % f for x, y, f in zip(g, h, self.factors))
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement(self.factors, {g: c for g, c in out.items() if c})

    def partial_augmentations(self, table: CharacterTable) -> list[int]:
        """Coefficient at each class of ``build_abelian_table(self.factors)``."""
        elems = _abelian_elements(self.factors)
        return [self.coeffs.get(g, 0) for g in elems]


def group_ring_power(x: GroupRingElement, k: int) -> GroupRingElement:
    if k < 0:
        raise ValueError("only nonnegative powers are supported")
    result = GroupRingElement.one(x.factors)
    base = x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result
