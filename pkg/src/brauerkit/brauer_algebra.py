"""Linear enrichment of the Brauer category.

Br_delta(m, n) is the free R-module on the open diagrams m -> n, with
composition tau_g tau_f = delta^k tau_gf where k counts the closed
components born from stacking.  Keeping delta formal recovers the
bubble count: BD with its closed-component bookkeeping embeds into
Br_t over Z[t] via (tau, k) |-> t^k tau, and that map is functorial.

Rings are value-level operation bundles, not a type-class hierarchy:
four instances cover the ground the tests need (integers, rationals,
dense integer polynomials in t, integers mod p).  Polynomial elements
are tuples of coefficients by degree with no trailing zeros, so
equality is tuple equality and the zero polynomial is ().
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .brauer import ArityMismatch, BrauerDiagram, compose_detailed, make_diagram


class RingMismatch(ValueError):
    pass


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Ring:
    """Commutative ring interface: zero one add neg mul eq from_int parse."""

    name = "?"

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a, k: int):
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return self.eq(a, self.zero())

    def __repr__(self):
        return f"Ring({self.name})"

    # rings are compared nominally so that parsed elements match
    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class _Integers(Ring):
    name = "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return k

    def parse(self, text):
        return int(text)

    def to_json(self, a):
        return a

    def from_json(self, obj):
        return int(obj)


class _Rationals(Ring):
    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return Fraction(k)

    def parse(self, text):
        return Fraction(text)

    def to_json(self, a):
        return str(a)

    def from_json(self, obj):
        return Fraction(str(obj))


class _IntPolynomials(Ring):
    """Z[t], dense coefficient tuples by degree."""

    name = "Z[t]"

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def t(self):
        return (0, 1)

    def add(self, a, b):
        width = max(len(a), len(b))
        a = a + (0,) * (width - len(a))
        b = b + (0,) * (width - len(b))
        return _strip(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return _strip(out)

    def from_int(self, k):
        return _strip([k])

    def parse(self, text):
        text = text.strip()
        if text == "t":
            return self.t()
        if text.startswith("["):
            import json

            return _strip(int(c) for c in json.loads(text))
        return self.from_int(int(text))

    def to_json(self, a):
        return list(a)

    def from_json(self, obj):
        if isinstance(obj, list):
            return _strip(int(c) for c in obj)
        return self.from_int(int(obj))


class _IntegersMod(Ring):
    def __init__(self, p: int):
        if p < 2:
            raise ValueError(f"modulus must be >= 2: {p}")
        self.p = p
        self.name = f"Z/{p}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def from_int(self, k):
        return k % self.p

    def parse(self, text):
        return int(text) % self.p

    def to_json(self, a):
        return a

    def from_json(self, obj):
        return int(obj) % self.p


ZZ = _Integers()
QQ = _Rationals()
ZPOLY = _IntPolynomials()


def integers_mod(p: int) -> Ring:
    return _IntegersMod(p)


def ring_by_name(name: str) -> Ring:
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name in ("Z[t]", "Zt"):
        return ZPOLY
    if name.startswith("Z/"):
        return integers_mod(int(name[2:]))
    raise ValueError(f"unknown ring: {name!r}")


def _diagram_key(d: BrauerDiagram):
    return (d.m, d.n, d.pairs)


@dataclass(frozen=True)
class BrElement:
    ring: Ring
    m: int
    n: int
    terms: tuple  # tuple of (open BrauerDiagram, nonzero coefficient)

    def coefficient(self, d: BrauerDiagram):
        for key, c in self.terms:
            if key == d:
                return c
        return self.ring.zero()


def make_element(ring: Ring, m: int, n: int, terms) -> BrElement:
    acc = {}
    for d, c in dict(terms).items():
        if d.closed != 0:
            raise ArityMismatch(f"basis diagrams must be open: {d!r}")
        if (d.m, d.n) != (m, n):
            raise ArityMismatch(f"term arity {(d.m, d.n)} != element arity {(m, n)}")
        acc[d] = ring.add(acc.get(d, ring.zero()), c)
    pruned = [(d, c) for d, c in acc.items() if not ring.is_zero(c)]
    pruned.sort(key=lambda dc: _diagram_key(dc[0]))
    return BrElement(ring, m, n, tuple(pruned))


def element_of(ring: Ring, d: BrauerDiagram, coeff=None) -> BrElement:
    """Single open diagram as an element; coeff defaults to 1."""
    coeff = ring.one() if coeff is None else coeff
    return make_element(ring, d.m, d.n, {make_diagram(d.m, d.n, d.pairs): coeff})


def br_zero(ring: Ring, m: int, n: int) -> BrElement:
    return BrElement(ring, m, n, ())


def br_add(a: BrElement, b: BrElement) -> BrElement:
    _check_rings(a, b)
    if (a.m, a.n) != (b.m, b.n):
        raise ArityMismatch(f"cannot add {(a.m, a.n)} and {(b.m, b.n)}")
    acc = {d: c for d, c in a.terms}
    for d, c in b.terms:
        acc[d] = a.ring.add(acc.get(d, a.ring.zero()), c)
    return make_element(a.ring, a.m, a.n, acc)


def br_scale(coeff, a: BrElement) -> BrElement:
    return make_element(
        a.ring, a.m, a.n, {d: a.ring.mul(coeff, c) for d, c in a.terms}
    )


def br_compose(a: BrElement, b: BrElement, delta) -> BrElement:
    """Bilinear extension of stacking; each born loop scales by delta."""
    _check_rings(a, b)
    if a.n != b.m:
        raise ArityMismatch(f"cannot stack {a.m}->{a.n} onto {b.m}->{b.n}")
    ring = a.ring
    acc = {}
    for f, cf in a.terms:
        for g, cg in b.terms:
            h, cycles = compose_detailed(f, g)
            open_part = make_diagram(h.m, h.n, h.pairs)
            coeff = ring.mul(ring.mul(cf, cg), ring.power(delta, len(cycles)))
            if open_part in acc:
                acc[open_part] = ring.add(acc[open_part], coeff)
            else:
                acc[open_part] = coeff
    return make_element(ring, a.m, b.n, acc)


def br_tensor(a: BrElement, b: BrElement) -> BrElement:
    from .brauer import tensor

    _check_rings(a, b)
    ring = a.ring
    acc = {}
    for f, cf in a.terms:
        for g, cg in b.terms:
            h = tensor(f, g)
            coeff = ring.mul(cf, cg)
            acc[h] = ring.add(acc.get(h, ring.zero()), coeff)
    return make_element(ring, a.m + b.m, a.n + b.n, acc)


def _check_rings(a: BrElement, b: BrElement):
    if a.ring is not b.ring and a.ring.name != b.ring.name:
        raise RingMismatch(f"{a.ring.name} vs {b.ring.name}")


def bd_to_br_t(f: BrauerDiagram) -> BrElement:
    """(tau, k) |-> t^k tau over Z[t]; functorial for delta = t."""
    open_part = make_diagram(f.m, f.n, f.pairs)
    return element_of(ZPOLY, open_part, ZPOLY.power(ZPOLY.t(), f.closed))


def algebra_dimension(n: int) -> int:
    if n < 0:
        raise ArityMismatch(f"negative arity: {n}")
    return prod(range(1, 2 * n, 2)) if n else 1


def is_walled(f: BrauerDiagram, wall) -> bool:
    """Wall (m1, n1, m2, n2): sources split m1 | n1, targets m2 | n2.

    Walled diagrams pair {first source block, second target block}
    points with {second source block, first target block} points
    only, i.e. the pairing reads as a bijection between the two mixed
    boundary groups.
    """
    m1, n1, m2, n2 = wall
    if m1 + n1 != f.m or m2 + n2 != f.n:
        raise ArityMismatch(f"wall {wall!r} does not fit {f.m}->{f.n}")

    def group(label):
        kind, i = label[0], int(label[1:])
        if kind == "s":
            return 0 if i <= m1 else 1
        return 1 if i <= m2 else 0

    return all(group(a) != group(b) for a, b in f.pairs)


def element_to_json(a: BrElement) -> dict:
    from .brauer import diagram_to_json

    return {
        "ring": a.ring.name,
        "m": a.m,
        "n": a.n,
        "terms": [
            {"coeff": a.ring.to_json(c), "diagram": diagram_to_json(d)}
            for d, c in a.terms
        ],
    }


def element_from_json(obj: dict) -> BrElement:
    from .brauer import diagram_from_json

    ring = ring_by_name(obj["ring"])
    terms = {}
    for t in obj["terms"]:
        d = diagram_from_json(t["diagram"])
        terms[d] = ring.from_json(t["coeff"])
    return make_element(ring, int(obj["m"]), int(obj["n"]), terms)
