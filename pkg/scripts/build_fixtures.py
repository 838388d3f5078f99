"""Regenerate the bundled character-table fixtures.

The ordinary tables are computed with Burnside's class-matrix method in
floating point and then rounded exactly: for a class of order m every
character value is a sum of m-th roots of unity, and the multiplicity of
each root is recovered as an integer from the values on the powers of the
class.  The loader re-validates every table with exact orthogonality, so
any rounding mistake here surfaces as a load error.

Usage: python scripts/build_fixtures.py [outdir]
"""

from __future__ import annotations

import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from paphelp.cyclotomics import canonicalize, prime_factors  # noqa: E402
from paphelp.group_model import load_table  # noqa: E402


class FiniteGroup:
    def __init__(self, name, gens, mul, identity):
        self.name = name
        self.mul = mul
        self.identity = identity
        elements = [identity]
        index = {identity: 0}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mul(x, g)
                    if y not in index:
                        index[y] = len(elements)
                        elements.append(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = elements
        self.index = index
        self.gens = gens
        self.order = len(elements)
        self._inv = {}

    def inv(self, x):
        if x not in self._inv:
            y = x
            prev = self.identity
            while y != self.identity:
                prev, y = y, self.mul(y, x)
            self._inv[x] = prev
        return self._inv[x]

    def power(self, x, k):
        result = self.identity
        for _ in range(k):
            result = self.mul(result, x)
        return result

    def element_order(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def conjugacy_classes(self):
        seen = {}
        classes = []
        for x in self.elements:
            if x in seen:
                continue
            orbit = [x]
            seen[x] = len(classes)
            i = 0
            while i < len(orbit):
                y = orbit[i]
                for g in self.gens:
                    z = self.mul(self.mul(g, y), self.inv(g))
                    if z not in seen:
                        seen[z] = len(classes)
                        orbit.append(z)
                i += 1
            classes.append(orbit)
        return classes, seen


def character_table(group: FiniteGroup, order_key=None):
    classes, class_of = group.conjugacy_classes()
    orders = [group.element_order(c[0]) for c in classes]
    perm = sorted(range(len(classes)), key=lambda i: (orders[i], order_key(classes[i]) if order_key else 0, i))
    classes = [classes[i] for i in perm]
    orders = [orders[i] for i in perm]
    relabel = {old: new for new, old in enumerate(perm)}
    class_of = {x: relabel[c] for x, c in class_of.items()}
    r = len(classes)
    sizes = [len(c) for c in classes]
    reps = [c[0] for c in classes]

    # a[i][j][k] = #{x in C_i : x^-1 z_k in C_j}
    a = np.zeros((r, r, r))
    for i in range(r):
        for k in range(r):
            z = reps[k]
            for x in classes[i]:
                a[i][class_of[group.mul(group.inv(x), z)]][k] += 1
    rng = np.random.default_rng(12345)
    combo = sum(rng.normal() * a[i] for i in range(r))
    _, vecs = np.linalg.eig(combo)
    chars = []
    for col in range(r):
        omega = vecs[:, col] / vecs[0, col]
        deg = math.sqrt(group.order / sum(abs(omega[c]) ** 2 / sizes[c] for c in range(r)).real)
        chars.append([omega[c] * deg / sizes[c] for c in range(r)])

    # power classes of each representative
    pow_class = []
    for c in range(r):
        seq, y = [], group.identity
        for _ in range(orders[c]):
            seq.append(class_of[y])
            y = group.mul(y, reps[c])
        pow_class.append(seq)

    exact = []
    for chi in chars:
        row = []
        for c in range(r):
            m = orders[c]
            terms = []
            for j in range(m):
                s = sum(chi[pow_class[c][k]] * np.exp(-2j * np.pi * j * k / m) for k in range(m)) / m
                e = round(s.real)
                assert abs(s - e) < 1e-6, (group.name, c, j, s)
                if e:
                    terms.append((j, e))
            row.append(canonicalize(terms, m))
        exact.append(row)
    exact.sort(key=lambda row: (int(row[0].to_rational()), [complex(v).real for v in row], [complex(v).imag for v in row]))

    exponent = math.lcm(*orders)
    power_maps = {}
    for p in sorted(set(prime_factors(exponent))):
        power_maps[str(p)] = [pow_class[c][p % orders[c]] for c in range(r)]
    letter = {}
    names = []
    for m in orders:
        idx = letter.get(m, 0)
        letter[m] = idx + 1
        names.append(f"{m}{chr(ord('a') + idx)}")
    return {
        "name": group.name,
        "order": group.order,
        "exponent": exponent,
        "classes": [
            {"name": names[c], "element_order": orders[c], "size": sizes[c]} for c in range(r)
        ],
        "power_maps": power_maps,
        "characters": [[v.to_json() for v in row] for row in exact],
    }, classes


# --- concrete groups -------------------------------------------------------


def perm_mul(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def perm_from_cycles(n, *cycles):
    img = list(range(n))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            img[x] = cyc[(i + 1) % len(cyc)]
    return tuple(img)


def perm_group(name, n, gens):
    return FiniteGroup(name, [perm_from_cycles(n, *g) for g in gens], perm_mul, tuple(range(n)))


def matrix_group(name, p, gens, projective=False):
    def norm(m):
        m = tuple(x % p for x in m)
        if projective:
            neg = tuple((-x) % p for x in m)
            return min(m, neg)
        return m

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return norm((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    return FiniteGroup(name, [norm(g) for g in gens], mul, norm((1, 0, 0, 1)))


def affine_group(name, p, lin_gens, translations):
    # x -> A x + v on F_p^2; element ((a,b,c,d), (v1, v2))
    def apply(m, v):
        a, b, c, d = m
        return ((a * v[0] + b * v[1]) % p, (c * v[0] + d * v[1]) % p)

    def mul(x, y):
        (m1, v1), (m2, v2) = x, y
        a, b, c, d = m1
        e, f, g, h = m2
        m = tuple(t % p for t in (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))
        w = apply(m1, v2)
        return (m, ((w[0] + v1[0]) % p, (w[1] + v1[1]) % p))

    ident = ((1, 0, 0, 1), (0, 0))
    gens = [(tuple(x % p for x in g), (0, 0)) for g in lin_gens]
    gens += [((1, 0, 0, 1), t) for t in translations]
    return FiniteGroup(name, gens, mul, ident)


def frobenius_group(name, q, mults):
    # x -> a x + b over F_q
    def mul(x, y):
        a1, b1 = x
        a2, b2 = y
        return ((a1 * a2) % q, (a1 * b2 + b1) % q)

    gens = [(m, 0) for m in mults] + [(1, 1)]
    return FiniteGroup(name, gens, mul, (1, 0))


def quaternion_group():
    def mul(x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    return FiniteGroup("Q8", [(0, 1, 0, 0), (0, 0, 1, 0)], mul, (1, 0, 0, 0))


# --- Brauer characters of PSL(2, q) in defining characteristic -------------


def psl2_defining_brauer(group: FiniteGroup, class_reps, orders, q):
    """Brauer characters Sym^k (k even, k < q) of PSL(2, q), q prime = 3 mod 4."""
    assert q % 4 == 3
    # F_{q^2} = F_q(i), i^2 = -1
    def fmul(x, y):
        return ((x[0] * y[0] - x[1] * y[1]) % q, (x[0] * y[1] + x[1] * y[0]) % q)

    field = [(a, b) for a in range(q) for b in range(q) if (a, b) != (0, 0)]
    gen = None
    for cand in field:
        y, k = cand, 1
        while y != (1, 0):
            y = fmul(y, cand)
            k += 1
        if k == q * q - 1:
            gen = cand
            break
    log = {}
    y = (1, 0)
    for k in range(q * q - 1):
        log[y] = k
        y = fmul(y, gen)
    big = q * q - 1
    regular = [c for c in range(len(orders)) if orders[c] % q]
    chars = []
    for k in range(0, q, 2):
        row = []
        for c in regular:
            a, b, cc, d = class_reps[c]
            tr = (a + d) % q
            # eigenvalue: root of x^2 - tr x + 1
            lam = next(x for x in field if fmul(x, x) == ((tr * x[0] - 1) % q, (tr * x[1]) % q))
            ex = log[lam]
            m = orders[c]
            terms = []
            for i in range(k + 1):
                e = ex * (k - 2 * i)
                assert (e * m) % big == 0
                terms.append(((e * m // big) % m, 1))
            row.append(canonicalize(terms, m))
        chars.append(row)
    chars.sort(key=lambda r: int(r[0].to_rational()))
    return {"regular_classes": regular, "characters": [[v.to_json() for v in r] for r in chars]}


def build_all():
    out = {}

    def add(key, group, pap=False, order_key=None, rename=None):
        doc, classes = character_table(group, order_key)
        if rename:
            rename(doc)
        doc["pap_assumed"] = pap
        out[key] = doc
        return doc, classes

    add("S3", perm_group("S3", 3, [[(0, 1, 2)], [(0, 1)]]), pap=True)
    add("D8", perm_group("D8", 4, [[(0, 1, 2, 3)], [(0, 2)]]), pap=True)
    add("Q8", quaternion_group(), pap=True)
    add("A4", perm_group("A4", 4, [[(0, 1, 2)], [(0, 1), (2, 3)]]), pap=True)
    add("S4", perm_group("S4", 4, [[(0, 1, 2, 3)], [(0, 1)]]))
    add("SL(2,3)", matrix_group("SL(2,3)", 3, [(1, 1, 0, 1), (0, -1, 1, 0)]), pap=True)
    add("C7:C3", frobenius_group("C7:C3", 7, [2]), pap=True)
    add("A5", perm_group("A5", 5, [[(0, 1, 2, 3, 4)], [(0, 1, 2)]]))
    add(
        "SmallGroup(216,153)",
        affine_group("SmallGroup(216,153)", 3, [(1, 1, 0, 1), (0, -1, 1, 0)], [(1, 0)]),
        order_key=lambda cls: -len(cls),
        rename=_rename_216,
    )
    g = matrix_group("PSL(2,19)", 19, [(1, 1, 0, 1), (0, -1, 1, 0)], projective=True)
    doc, classes = add("PSL(2,19)", g)
    orders = [c["element_order"] for c in doc["classes"]]
    doc["brauer"] = {"19": psl2_defining_brauer(g, [c[0] for c in classes], orders, 19)}
    return out


def _rename_216(doc):
    """Name the order-3 and order-6 classes so that 3a^2 = 6a^2 = 3c, 3d^2 = 3e.

    Classes with the same element order are told apart by size and by the
    square map; see the fixture notes in the README.
    """
    cls = doc["classes"]
    sq = doc["power_maps"]["2"]
    three = [i for i, c in enumerate(cls) if c["element_order"] == 3]
    six = [i for i, c in enumerate(cls) if c["element_order"] == 6]
    # the square of an order-6 element generates a class of order 3
    names = {}
    # 3a/3c pair: the inverse pair of order-3 classes hit by squares of order-6 elements
    targets = {sq[i] for i in six}
    pairs = []
    for i in three:
        j = sq[i]
        if i < j:
            pairs.append((i, j))
    self_inverse = [i for i in three if sq[i] == i]
    hit = [p for p in pairs if p[0] in targets or p[1] in targets]
    other = [p for p in pairs if p not in hit]
    assert len(hit) == 1 and len(other) == 1 and len(self_inverse) == 1, (pairs, self_inverse, targets)
    c3 = hit[0][0] if hit[0][0] in targets else hit[0][1]
    a3 = sq[c3]
    names[a3], names[c3] = "3a", "3c"
    names[self_inverse[0]] = "3b"
    d3, e3 = other[0]
    names[d3], names[e3] = "3d", "3e"
    six_sorted = sorted(six, key=lambda i: (sq[i] != c3, i))
    for k, i in enumerate(six_sorted):
        names[i] = f"6{chr(ord('a') + k)}"
    for i, n in names.items():
        cls[i]["name"] = n


def main(argv):
    outdir = Path(argv[1]) if len(argv) > 1 else ROOT / "src" / "paphelp" / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for key, doc in build_all().items():
        fname = key.replace("(", "_").replace(")", "").replace(",", "_").replace(":", "x")
        path = outdir / f"{fname}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        table = load_table(path)
        print(f"{path.name}: {len(table.classes)} classes, exponent {table.exponent}, validated")


if __name__ == "__main__":
    main(sys.argv)
