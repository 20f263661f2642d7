"""Finite graphical species, circuit-operad structure, and Segal checks.

A species assigns a finite set to each colour word, with the symmetric
groups acting by relabelling.  Storage convention: tables live at
sorted words only, and an element of S_w for an unsorted w is referred
to by its name in the sorted table, via the stable sorting permutation
of w.  All the derived operations below (products, contractions,
generic relabellings) reduce to stored data through that identification.

Permutations are tuples p acting on 0-based positions; the word
transport is (w . p)[i] = w[p[i]], and the presheaf is contravariant:
S(p . q) = S(q) o S(p).  Stored action entries only ever stabilize
their word, so composites can be looked up in a closed group table.

Structures on a graph are pairs (edge colouring, vertex assignment),
both as sorted tuples of pairs, so they double as labels and can sit
inside presheaf tables or JSON documents unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .coloured import Palette, palette_from_json, palette_to_json
from .graph import (
    InvalidParameter,
    XGraph,
    element_arrows,
    elements,
    glue,
    graph_from_json,
    graph_to_json,
    make_graph,
    make_xgraph,
    x_certificate,
    x_iso,
)
from .labels import decode_label, encode_label, label_key, sort_labels
from .wiring import (
    ArityBoundExceeded,
    ColourMismatch,
    MissingActionEntry,
    make_wiring,
    unit_epsilon,
)


class BoundTooLarge(ValueError):
    pass


class MissingRestriction(ValueError):
    pass


# ---------------------------------------------------------------------------
# position permutations


def _identity(n):
    return tuple(range(n))


def _comp(p, q):
    # (p o q)[i] = p[q[i]]
    return tuple(p[i] for i in q)


def _inv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _apply(word, p):
    return tuple(word[i] for i in p)


def _sort_perm(word):
    # stable, so the permutation of an already-sorted word is the identity
    return tuple(sorted(range(len(word)), key=lambda i: (label_key(word[i]), i)))


def _block(p, q):
    return p + tuple(len(p) + i for i in q)


def _drop(word, i, j):
    return tuple(c for k, c in enumerate(word) if k not in (i, j))


def _shifted(pos, removed):
    return pos - sum(1 for r in removed if r < pos)


# ---------------------------------------------------------------------------
# species


@dataclass(frozen=True)
class GraphicalSpecies:
    """Arity tables at sorted colour words plus stabilizer actions.

    tables: ((word, elements), ...); actions: ((word, perm, mapping), ...)
    where each perm fixes its word letterwise and mapping lists the
    bijection as (element, image) pairs.
    """

    palette: Palette
    bound: int
    tables: tuple
    actions: tuple

    @cached_property
    def table_map(self):
        return {w: es for w, es in self.tables}

    @cached_property
    def _closures(self):
        # close the listed bijections under composition; a subsemigroup
        # of a finite group is a subgroup, so inverses come for free
        listed = {}
        for word, perm, mapping in self.actions:
            listed.setdefault(word, []).append((perm, dict(mapping)))
        out = {}
        for word, gens in listed.items():
            elems = self.table_map.get(word, ())
            group = {_identity(len(word)): {e: e for e in elems}}
            frontier = list(group)
            while frontier:
                p = frontier.pop()
                pmap = group[p]
                for q, qmap in gens:
                    r = _comp(p, q)
                    rmap = {e: qmap[pmap[e]] for e in elems}
                    if r in group:
                        if group[r] != rmap:
                            raise InvalidParameter(
                                f"action entries at {word!r} are inconsistent"
                            )
                    else:
                        group[r] = rmap
                        frontier.append(r)
            out[word] = group
        return out

    def rep(self, word):
        word = tuple(word)
        for c in word:
            self.palette.omega(c)
        return tuple(sort_labels(word))

    def elements(self, word):
        word = tuple(word)
        if len(word) > self.bound:
            raise ArityBoundExceeded(
                f"word of length {len(word)} exceeds bound {self.bound}"
            )
        return self.table_map.get(self.rep(word), ())

    def act_name(self, rep_word, theta, name):
        if _apply(rep_word, theta) != rep_word:
            raise InvalidParameter(f"{theta!r} does not stabilize {rep_word!r}")
        if theta == _identity(len(theta)):
            return name
        if len(self.table_map.get(rep_word, ())) <= 1:
            return name  # the only bijection of a small set
        group = self._closures.get(rep_word, {})
        if theta not in group:
            raise InvalidParameter(
                f"no action entry reaches {theta!r} at {rep_word!r}"
            )
        return group[theta][name]

    def transport(self, word, sigma, name):
        """The name of S(sigma) applied to the element named `name` of S_word."""
        word = tuple(word)
        p = _sort_perm(word)
        target = _apply(word, sigma)
        theta = _comp(_inv(p), _comp(sigma, _sort_perm(target)))
        return self.act_name(_apply(word, p), theta, name)


def make_species(palette, bound, tables, actions=()):
    if isinstance(bound, bool) or not isinstance(bound, int) or bound < 0:
        raise InvalidParameter(f"bound must be a non-negative integer, got {bound!r}")
    if isinstance(tables, dict):
        tables = tables.items()
    norm_tables = {}
    for word, elems in tables:
        word = tuple(word)
        for c in word:
            palette.omega(c)
        if len(word) > bound:
            raise ArityBoundExceeded(f"table word {word!r} longer than bound {bound}")
        if word != tuple(sort_labels(word)):
            raise InvalidParameter(f"table word {word!r} is not sorted")
        if word in norm_tables:
            raise InvalidParameter(f"duplicate table word {word!r}")
        elems = tuple(elems)
        for e in elems:
            label_key(e)
        if len(set(elems)) != len(elems):
            raise InvalidParameter(f"duplicate elements at {word!r}")
        norm_tables[word] = elems

    norm_actions = []
    for word, perm, mapping in actions:
        word, perm = tuple(word), tuple(perm)
        if word not in norm_tables:
            raise InvalidParameter(f"action at unlisted word {word!r}")
        if sorted(perm) != list(range(len(word))):
            raise InvalidParameter(f"{perm!r} is not a permutation")
        if _apply(word, perm) != word:
            raise InvalidParameter(f"{perm!r} moves the letters of {word!r}")
        mapping = dict(mapping)
        elems = norm_tables[word]
        if set(mapping) != set(elems) or set(mapping.values()) != set(elems):
            raise InvalidParameter(f"action at {word!r} is not a table bijection")
        norm_actions.append((word, perm, tuple(sorted(mapping.items(),
                                                      key=lambda kv: label_key(kv[0])))))

    sp = GraphicalSpecies(
        palette,
        bound,
        tuple(sorted(norm_tables.items(), key=lambda kv: label_key(kv[0]))),
        tuple(norm_actions),
    )
    sp._closures  # composing the listed actions must not conflict
    return sp


def terminal_species(palette, bound):
    """Singleton arities everywhere; every structure map is forced."""
    tables = {}
    for n in range(bound + 1):
        for word in itertools.combinations_with_replacement(palette.colours, n):
            tables[word] = ("*",)
    return make_species(palette, bound, tables)


# ---------------------------------------------------------------------------
# evaluation


def _carrier(g):
    return g.graph if isinstance(g, XGraph) else g


def evaluate(S, g):
    """All S-structures on g: an omega-compatible colouring of the edges
    together with an arity-table element per vertex."""
    g = _carrier(g)
    for v in g.vertices:
        if g.valency(v) > S.bound:
            raise ArityBoundExceeded(
                f"vertex {v!r} has valency {g.valency(v)}, bound is {S.bound}"
            )
    omega = S.palette.omega
    out = []
    for combo in itertools.product(S.palette.colours, repeat=len(g.tau_pairs)):
        kappa = {}
        for (a, b), c in zip(g.tau_pairs, combo):
            kappa[a] = c
            kappa[b] = omega(c)
        options = []
        for v in g.vertices:
            word = tuple(kappa[e] for e in g.vertex_edges(v))
            names = S.elements(word)
            if not names:
                options = None
                break
            options.append([(v, n) for n in names])
        if options is None:
            continue
        colour_items = tuple((e, kappa[e]) for e in g.edges)
        for assign in itertools.product(*options):
            out.append((colour_items, tuple(assign)))
    return tuple(out)


def evaluate_by_equalizers(S, g):
    """The same set computed from the resolution: a product of vertex
    tables cut down by one letter-matching condition per inner orbit."""
    g = _carrier(g)
    if g.stick_components:
        raise InvalidParameter("the resolution needs a graph without stick components")
    for v in g.vertices:
        if g.valency(v) > S.bound:
            raise ArityBoundExceeded(
                f"vertex {v!r} has valency {g.valency(v)}, bound is {S.bound}"
            )
    omega = S.palette.omega
    attached = g.edge_vertex
    per_vertex = []
    for v in g.vertices:
        opts = []
        for word in itertools.product(S.palette.colours, repeat=g.valency(v)):
            for name in S.elements(word):
                opts.append((v, word, name))
        per_vertex.append(opts)
    out = []
    for combo in itertools.product(*per_vertex):
        letters = {}
        for v, word, _ in combo:
            for e, c in zip(g.vertex_edges(v), word):
                letters[e] = c
        ok = True
        for a, b in g.tau_pairs:
            if a in attached and b in attached and letters[a] != omega(letters[b]):
                ok = False
                break
        if not ok:
            continue
        for p in g.ports:
            letters[p] = omega(letters[g.tau(p)])
        colour_items = tuple((e, letters[e]) for e in g.edges)
        out.append((colour_items, tuple((v, n) for v, _, n in combo)))
    return tuple(out)


def transport_structure(S, witness, structure):
    """Push a structure along an isomorphism witness, reordering each
    vertex's table name through the induced word permutation."""
    g, h = witness.source, witness.target
    colour_items, vertex_items = structure
    kappa = dict(colour_items)
    moved = {witness.edge_map[e]: c for e, c in colour_items}
    inv_edge = {witness.edge_map[e]: e for e in g.edges}
    new_alpha = {}
    for v, name in vertex_items:
        w = witness.vertex_map[v]
        src_edges = g.vertex_edges(v)
        word = tuple(kappa[e] for e in src_edges)
        pos = {e: i for i, e in enumerate(src_edges)}
        theta = tuple(pos[inv_edge[e]] for e in h.vertex_edges(w))
        new_alpha[w] = S.transport(word, theta, name)
    return (
        tuple((e, moved[e]) for e in h.edges),
        tuple((v, new_alpha[v]) for v in h.vertices),
    )


# ---------------------------------------------------------------------------
# pointed and circuit-operad structure


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    checked: int
    violations: tuple
    notes: tuple = ()


@dataclass(frozen=True)
class PointedStructure:
    epsilon: tuple     # ((colour, name at the word (c, omega c)), ...)
    contracted: tuple  # ((colour, name at the empty word), ...)

    @cached_property
    def epsilon_map(self):
        return dict(self.epsilon)

    @cached_property
    def contracted_map(self):
        return dict(self.contracted)


@dataclass(frozen=True)
class CircuitOperadStructure:
    """External products, contractions, and units, tabulated at sorted words.

    boxtimes: ((word1, word2, rows), ...) with rows ((a, b, value), ...);
    contraction: ((word, i, j, rows), ...) with 0-based i < j and rows
    ((a, value), ...); epsilon: ((colour, name), ...).  external_unit is
    an element of the empty-word table, or None when the structure omits
    it (the write-up mostly suppresses that unit, so it stays optional).
    """

    boxtimes: tuple
    contraction: tuple
    epsilon: tuple
    external_unit: object = None

    @cached_property
    def box_map(self):
        return {(w1, w2): {(a, b): v for a, b, v in rows}
                for w1, w2, rows in self.boxtimes}

    @cached_property
    def zeta_map(self):
        return {(w, i, j): dict(rows) for w, i, j, rows in self.contraction}

    @cached_property
    def epsilon_map(self):
        return dict(self.epsilon)


def make_operad_structure(boxtimes, contraction, epsilon, external_unit=None):
    box = []
    for w1, w2, rows in (
            ((w1, w2, rows) for (w1, w2), rows in boxtimes.items())
            if isinstance(boxtimes, dict) else boxtimes):
        if isinstance(rows, dict):
            rows = tuple((a, b, v) for (a, b), v in rows.items())
        box.append((tuple(w1), tuple(w2), tuple(rows)))
    zeta = []
    for w, i, j, rows in (
            ((w, i, j, rows) for (w, i, j), rows in contraction.items())
            if isinstance(contraction, dict) else contraction):
        if isinstance(rows, dict):
            rows = tuple(rows.items())
        zeta.append((tuple(w), int(i), int(j), tuple(rows)))
    eps = tuple(epsilon.items() if isinstance(epsilon, dict) else epsilon)
    return CircuitOperadStructure(tuple(box), tuple(zeta), eps, external_unit)


def apply_product(S, C, w1, n1, w2, n2):
    """Name of the external product of elements named n1, n2 of S_w1, S_w2."""
    w1, w2 = tuple(w1), tuple(w2)
    if len(w1) + len(w2) > S.bound:
        raise ArityBoundExceeded(f"|{w1!r}| + |{w2!r}| exceeds bound {S.bound}")
    q1, q2 = _sort_perm(w1), _sort_perm(w2)
    r1, r2 = _apply(w1, q1), _apply(w2, q2)
    rows = C.box_map.get((r1, r2))
    if rows is None or (n1, n2) not in rows:
        raise MissingActionEntry(f"no product entry for {r1!r} x {r2!r}")
    base = rows[(n1, n2)]
    whole = w1 + w2
    theta = _comp(_inv(_sort_perm(r1 + r2)),
                  _comp(_inv(_block(q1, q2)), _sort_perm(whole)))
    return S.act_name(S.rep(whole), theta, base)


def apply_contraction(S, C, w, x, y, n):
    """Name of the contraction at positions x, y of the element named n of S_w."""
    w = tuple(w)
    m = len(w)
    if not (0 <= x < m and 0 <= y < m and x != y):
        raise InvalidParameter(f"positions {(x, y)!r} out of range")
    if w[x] != S.palette.omega(w[y]):
        raise ColourMismatch(
            f"letters {w[x]!r}, {w[y]!r} at {(x, y)!r} are not omega-dual"
        )
    q = _sort_perm(w)
    r = _apply(w, q)
    qinv = _inv(q)
    i, j = sorted((qinv[x], qinv[y]))
    rows = C.zeta_map.get((r, i, j))
    if rows is None or n not in rows:
        raise MissingActionEntry(f"no contraction entry for {r!r} at {(i, j)!r}")
    val = rows[n]
    keep_r = [k for k in range(m) if k not in (i, j)]
    keep_w = [k for k in range(m) if k not in (x, y)]
    pos_w = {p: t for t, p in enumerate(keep_w)}
    qhat = tuple(pos_w[q[k]] for k in keep_r)
    w_rest = tuple(w[k] for k in keep_w)
    theta = _comp(_inv(qhat), _sort_perm(w_rest))
    return S.act_name(_drop(r, i, j), theta, val)


def apply_multiplication(S, C, w1, x, w2, y, n1, n2):
    # multiplication as contraction of the external product
    return apply_contraction(S, C, tuple(w1) + tuple(w2), x, len(w1) + y,
                      apply_product(S, C, w1, n1, w2, n2))


def validate_pointed(S, P):
    violations = []
    checked = 0
    omega = S.palette.omega
    eps, kap = P.epsilon_map, P.contracted_map
    if set(eps) != set(S.palette.colours):
        violations.append(("unit-coverage", f"epsilon lists {sorted(map(str, eps))}"))
    if set(kap) != set(S.palette.colours):
        violations.append(("unit-coverage", f"contracted lists {sorted(map(str, kap))}"))
    for c in S.palette.colours:
        if c not in eps or c not in kap:
            continue
        word = (c, omega(c))
        checked += 1
        if eps[c] not in S.elements(word):
            violations.append(("unit-typing", f"epsilon[{c!r}] outside S{word!r}"))
            continue
        checked += 1
        swapped = S.transport(word, (1, 0), eps[c])
        if swapped != eps.get(omega(c)):
            violations.append(
                ("unit-symmetry",
                 f"S(swap) epsilon[{c!r}] = {swapped!r} != epsilon[{omega(c)!r}]")
            )
        checked += 1
        if kap[c] not in S.elements(()):
            violations.append(("unit-typing", f"contracted[{c!r}] outside S()"))
        checked += 1
        if kap[c] != kap.get(omega(c)):
            violations.append(
                ("orbit-factoring",
                 f"contracted[{c!r}] != contracted[{omega(c)!r}]")
            )
    return ValidationReport(not violations, checked, tuple(violations))


def _contractable(S, word):
    omega = S.palette.omega
    return [(i, j) for i in range(len(word)) for j in range(i + 1, len(word))
            if word[i] == omega(word[j])]


def _typing_pass(S, C):
    violations = []
    words = {w for w, es in S.tables if es}
    for (w1, w2), rows in C.box_map.items():
        for w in (w1, w2):
            if w not in S.table_map:
                violations.append(("product-typing", f"unknown word {w!r}"))
                return violations  # nothing downstream is trustworthy
        want = set(itertools.product(S.table_map[w1], S.table_map[w2]))
        if set(rows) != want:
            violations.append(("product-typing",
                               f"rows at {w1!r} x {w2!r} miss the element grid"))
        target = S.rep(w1 + w2)
        for key, val in rows.items():
            if val not in S.table_map.get(target, ()):
                violations.append(
                    ("product-typing", f"{w1!r} x {w2!r} at {key!r} -> {val!r}")
                )
    for w1 in words:
        for w2 in words:
            if len(w1) + len(w2) <= S.bound and (w1, w2) not in C.box_map:
                violations.append(("product-typing",
                                   f"missing product table {w1!r} x {w2!r}"))
    for (w, i, j), rows in C.zeta_map.items():
        if w not in S.table_map or not (0 <= i < j < len(w)):
            violations.append(("contraction-typing", f"bad key {(w, i, j)!r}"))
            continue
        if w[i] != S.palette.omega(w[j]):
            violations.append(("contraction-typing",
                               f"{(i, j)!r} not omega-dual in {w!r}"))
            continue
        if set(rows) != set(S.table_map[w]):
            violations.append(("contraction-typing",
                               f"rows at {(w, i, j)!r} miss the table"))
        target = _drop(w, i, j)
        for key, val in rows.items():
            if val not in S.table_map.get(target, ()):
                violations.append(
                    ("contraction-typing", f"{(w, i, j)!r} at {key!r} -> {val!r}")
                )
    for w in words:
        for i, j in _contractable(S, w):
            if (w, i, j) not in C.zeta_map:
                violations.append(("contraction-typing",
                                   f"missing contraction table {(w, i, j)!r}"))
    eps = C.epsilon_map
    if set(eps) != set(S.palette.colours):
        violations.append(("unit-typing", "epsilon does not cover the palette"))
    for c, name in eps.items():
        word = (c, S.palette.omega(c))
        if name not in S.elements(word):
            violations.append(("unit-typing", f"epsilon[{c!r}] outside S{word!r}"))
    if C.external_unit is not None and C.external_unit not in S.elements(()):
        violations.append(("unit-typing", "external unit outside the empty-word table"))
    return violations


def _listed_perms(S, word):
    out = [_identity(len(word))]
    for w, perm, _ in S.actions:
        if w == word:
            out.append(perm)
    return out


def validate_circuit_operad(S, C):
    """Exhaustive axiom check within the arity bound: typing, the
    equivariance of both tables against the listed actions, product
    associativity, contraction commutation and compatibility, and the
    unit laws."""
    violations = _typing_pass(S, C)
    if violations:
        return ValidationReport(False, 0, tuple(violations))
    checked = 0
    omega = S.palette.omega
    words = [w for w, es in S.tables if es]
    elems = S.table_map

    def record(tag, text):
        violations.append((tag, text))

    # unit symmetry
    for c in S.palette.colours:
        word = (c, omega(c))
        checked += 1
        swapped = S.transport(word, (1, 0), C.epsilon_map[c])
        if swapped != C.epsilon_map[omega(c)]:
            record("unit-symmetry", f"epsilon at {c!r} is not omega-compatible")

    # equivariance of the stored tables against the listed actions
    for (w1, w2), rows in C.box_map.items():
        for sigma in _listed_perms(S, w1):
            whole = _block(sigma, _identity(len(w2)))
            for (a, b), val in rows.items():
                checked += 1
                lhs = S.transport(w1 + w2, whole, val)
                rhs = apply_product(S, C, w1, S.act_name(w1, sigma, a), w2, b)
                if lhs != rhs:
                    record("product-equivariance",
                           f"{w1!r} x {w2!r}, perm {sigma!r}, inputs {(a, b)!r}")
    for (w, i, j), rows in C.zeta_map.items():
        for sigma in _listed_perms(S, w):
            inv = _inv(sigma)
            x, y = inv[i], inv[j]
            keep_s = [k for k in range(len(w)) if k not in (i, j)]
            pos = {p: t for t, p in enumerate(keep_s)}
            keep_x = [k for k in range(len(w)) if k not in (x, y)]
            sigma_hat = tuple(pos[sigma[k]] for k in keep_x)
            for a, val in rows.items():
                checked += 1
                lhs = apply_contraction(S, C, w, x, y, S.act_name(w, sigma, a))
                rhs = S.transport(_drop(w, i, j), sigma_hat, val)
                if lhs != rhs:
                    record("contraction-equivariance",
                           f"{(w, i, j)!r}, perm {sigma!r}, input {a!r}")

    # (C1) associativity of the external product
    for w1, w2, w3 in itertools.product(words, repeat=3):
        if len(w1) + len(w2) + len(w3) > S.bound:
            continue
        for a, b, c in itertools.product(elems[w1], elems[w2], elems[w3]):
            checked += 1
            lhs = apply_product(S, C, w1 + w2, apply_product(S, C, w1, a, w2, b), w3, c)
            rhs = apply_product(S, C, w1, a, w2 + w3, apply_product(S, C, w2, b, w3, c))
            if lhs != rhs:
                record("product-associativity",
                       f"words {(w1, w2, w3)!r}, inputs {(a, b, c)!r}")

    # (C2) disjoint contractions commute
    for w in words:
        pairs = _contractable(S, w)
        for (a, b), (c, d) in itertools.combinations(pairs, 2):
            if {a, b} & {c, d}:
                continue
            for n in elems[w]:
                checked += 1
                first = apply_contraction(S, C, w, a, b, n)
                lhs = apply_contraction(S, C, _drop(w, a, b),
                                 _shifted(c, (a, b)), _shifted(d, (a, b)), first)
                second = apply_contraction(S, C, w, c, d, n)
                rhs = apply_contraction(S, C, _drop(w, c, d),
                                 _shifted(a, (c, d)), _shifted(b, (c, d)), second)
                if lhs != rhs:
                    record("contraction-commutation",
                           f"word {w!r}, pairs {((a, b), (c, d))!r}, input {n!r}")

    # (C3) contraction slides out of an external product
    for (w1, w2), rows in C.box_map.items():
        if not rows:
            continue
        for i, j in _contractable(S, w1):
            for (a, b), val in rows.items():
                checked += 1
                lhs = apply_contraction(S, C, w1 + w2, i, j, val)
                rhs = apply_product(S, C, _drop(w1, i, j),
                                apply_contraction(S, C, w1, i, j, a), w2, b)
                if lhs != rhs:
                    record("product-contraction",
                           f"{w1!r} x {w2!r}, pair {(i, j)!r}, inputs {(a, b)!r}")

    # unit law: boxing with epsilon and contracting is a relabelling
    for w in words:
        m = len(w)
        if m == 0 or m + 2 > S.bound:
            continue
        for x in range(m):
            c = w[x]
            eps_word = (c, omega(c))
            cycle = tuple(list(range(x)) + list(range(x + 1, m)) + [x])
            for n in elems[w]:
                checked += 1
                boxed = apply_product(S, C, w, n, eps_word, C.epsilon_map[c])
                left = apply_contraction(S, C, w + eps_word, x, m + 1, boxed)
                if left != S.transport(w, cycle, n):
                    record("connected-unit", f"word {w!r}, slot {x}, input {n!r}")

    notes = []
    if C.external_unit is None:
        notes.append("no external unit listed; its law was not in scope")
    else:
        notes.append("external unit present; absorption checked both ways")
        u = C.external_unit
        for w in words:
            for n in elems[w]:
                checked += 2
                if apply_product(S, C, w, n, (), u) != n:
                    record("external-unit", f"right absorption fails at {w!r}, {n!r}")
                if apply_product(S, C, (), u, w, n) != n:
                    record("external-unit", f"left absorption fails at {w!r}, {n!r}")

    return ValidationReport(not violations, checked, tuple(violations), tuple(notes))


def check_modular_axioms(S, C):
    """The multiplication derived as contraction-after-product satisfies
    the modular-operad laws, instance by instance within the bound."""
    violations = []
    checked = 0
    words = [w for w, es in S.tables if es]
    elems = S.table_map
    omega = S.palette.omega

    def dual_pairs(wa, wb):
        return [(x, y) for x in range(len(wa)) for y in range(len(wb))
                if wa[x] == omega(wb[y])]

    # (M1) associativity across a two-step chain
    for w1, w2, w3 in itertools.product(words, repeat=3):
        if len(w1) + len(w2) + len(w3) > S.bound:
            continue
        for x1, y1 in dual_pairs(w1, w2):
            for y2, z in dual_pairs(w2, w3):
                if y2 == y1:
                    continue
                for a, b, c in itertools.product(elems[w1], elems[w2], elems[w3]):
                    checked += 1
                    d = apply_multiplication(S, C, w1, x1, w2, y1, a, b)
                    mid = _drop(w1 + w2, x1, len(w1) + y1)
                    lhs = apply_multiplication(
                        S, C, mid,
                        len(w1) - 1 + _shifted(y2, (y1,)), w3, z, d, c)
                    e = apply_multiplication(S, C, w2, y2, w3, z, b, c)
                    rhs = apply_multiplication(
                        S, C, w1, x1, _drop(w2 + w3, y2, len(w2) + z),
                        _shifted(y1, (y2,)), a, e)
                    if lhs != rhs:
                        violations.append(
                            ("multiplication-associativity",
                             f"words {(w1, w2, w3)!r}, slots {((x1, y1), (y2, z))!r}"))

    # (M2) is the commutation of disjoint contractions, restated
    for w in words:
        pairs = _contractable(S, w)
        for (a, b), (c, d) in itertools.combinations(pairs, 2):
            if {a, b} & {c, d}:
                continue
            for n in elems[w]:
                checked += 1
                lhs = apply_contraction(S, C, _drop(w, a, b),
                                 _shifted(c, (a, b)), _shifted(d, (a, b)),
                                 apply_contraction(S, C, w, a, b, n))
                rhs = apply_contraction(S, C, _drop(w, c, d),
                                 _shifted(a, (c, d)), _shifted(b, (c, d)),
                                 apply_contraction(S, C, w, c, d, n))
                if lhs != rhs:
                    violations.append(
                        ("contraction-commutation",
                         f"word {w!r}, pairs {((a, b), (c, d))!r}, input {n!r}"))

    # (M3) a contraction inside one factor slides past the multiplication
    for w1, w2 in itertools.product(words, repeat=2):
        if len(w1) + len(w2) > S.bound:
            continue
        inner = _contractable(S, w1)
        for i, j in inner:
            for x3, y in dual_pairs(w1, w2):
                if x3 in (i, j):
                    continue
                for a, b in itertools.product(elems[w1], elems[w2]):
                    checked += 1
                    za = apply_contraction(S, C, w1, i, j, a)
                    lhs = apply_multiplication(S, C, _drop(w1, i, j),
                                        _shifted(x3, (i, j)), w2, y, za, b)
                    d = apply_multiplication(S, C, w1, x3, w2, y, a, b)
                    lhs2 = apply_contraction(S, C, _drop(w1 + w2, x3, len(w1) + y),
                                      _shifted(i, (x3,)), _shifted(j, (x3,)), d)
                    if lhs != lhs2:
                        violations.append(
                            ("contraction-multiplication",
                             f"words {(w1, w2)!r}, slots {((i, j), (x3, y))!r}"))

    # (M4) two cross pairs: contracting either one first agrees
    for w1, w2 in itertools.product(words, repeat=2):
        if len(w1) + len(w2) > S.bound:
            continue
        cross = dual_pairs(w1, w2)
        for (x1, y1), (x2, y2) in itertools.permutations(cross, 2):
            if x1 == x2 or y1 == y2:
                continue
            for a, b in itertools.product(elems[w1], elems[w2]):
                checked += 1
                d = apply_multiplication(S, C, w1, x1, w2, y1, a, b)
                lhs = apply_contraction(
                    S, C, _drop(w1 + w2, x1, len(w1) + y1),
                    _shifted(x2, (x1,)),
                    len(w1) - 1 + _shifted(y2, (y1,)), d)
                e = apply_multiplication(S, C, w1, x2, w2, y2, a, b)
                rhs = apply_contraction(
                    S, C, _drop(w1 + w2, x2, len(w1) + y2),
                    _shifted(x1, (x2,)),
                    len(w1) - 1 + _shifted(y1, (y2,)), e)
                if lhs != rhs:
                    violations.append(
                        ("contraction-order",
                         f"words {(w1, w2)!r}, pairs {((x1, y1), (x2, y2))!r}"))

    return ValidationReport(not violations, checked, tuple(violations))


def _unit_law_holds(S, C, eps_map):
    omega = S.palette.omega
    for c in S.palette.colours:
        word = (c, omega(c))
        if S.transport(word, (1, 0), eps_map[c]) != eps_map[omega(c)]:
            return False
    for w, es in S.tables:
        m = len(w)
        if not es or m == 0 or m + 2 > S.bound:
            continue
        for x in range(m):
            c = w[x]
            cycle = tuple(list(range(x)) + list(range(x + 1, m)) + [x])
            for n in es:
                boxed = apply_product(S, C, w, n, (c, omega(c)), eps_map[c])
                if apply_contraction(S, C, w + (c, omega(c)), x, m + 1, boxed) != \
                        S.transport(w, cycle, n):
                    return False
    return True


def find_connected_units(S, C):
    """Every epsilon table satisfying the unit law against C's product
    and contraction; a lawful structure admits exactly one."""
    colours = S.palette.colours
    pools = []
    for c in colours:
        pool = S.elements((c, S.palette.omega(c)))
        if not pool:
            return ()
        pools.append(pool)
    found = []
    for combo in itertools.product(*pools):
        eps_map = dict(zip(colours, combo))
        if _unit_law_holds(S, C, eps_map):
            found.append(tuple(eps_map.items()))
    return tuple(found)


def find_external_units(S, C):
    found = []
    for u in S.elements(()):
        ok = True
        for w, es in S.tables:
            for n in es:
                if apply_product(S, C, w, n, (), u) != n or \
                        apply_product(S, C, (), u, w, n) != n:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(u)
    return tuple(found)


def pointed_from_operad(S, C):
    """Units plus their contractions, the way the pointing is adjoined."""
    contracted = []
    for c in S.palette.colours:
        word = (c, S.palette.omega(c))
        contracted.append((c, apply_contraction(S, C, word, 0, 1, C.epsilon_map[c])))
    return PointedStructure(tuple(C.epsilon), tuple(contracted))


# ---------------------------------------------------------------------------
# the bridge from circuit algebras


def _perm_wiring(palette, word, sigma):
    # the block permutation realizing S(sigma): strand i exits where the
    # target word picks letter i up again
    from .coloured import coloured_permutation

    inv = _inv(sigma)
    images = [inv[i] + 1 for i in range(len(word))]
    return make_wiring(coloured_permutation(palette, images, word), (len(word),))


def species_from_circuit_algebra(A):
    """Rebuild a circuit algebra's carriers as a species with the operad
    structure its wiring action induces.  Elements are renamed to their
    carrier indices so the result is plain label data."""
    from .wiring import derived_boxtimes, derived_contraction

    palette, bound = A.palette, A.bound
    omega = palette.omega

    def index_in(word, elem):
        return A.elements(word).index(elem)

    def act_perm(word, sigma, elem):
        if sigma == _identity(len(sigma)):
            return elem
        return A.act(_perm_wiring(palette, word, sigma))((elem,))

    reps = []
    for n in range(bound + 1):
        reps.extend(itertools.combinations_with_replacement(palette.colours, n))
    tables = {r: tuple(range(len(A.elements(r)))) for r in reps}

    actions = []
    for r in reps:
        if len(tables[r]) <= 1:
            continue
        carrier = A.elements(r)
        for k in range(len(r) - 1):
            if r[k] != r[k + 1]:
                continue
            perm = list(_identity(len(r)))
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            perm = tuple(perm)
            mapping = {i: index_in(r, act_perm(r, perm, carrier[i]))
                       for i in tables[r]}
            actions.append((r, perm, mapping))

    S = make_species(palette, bound, tables, actions)

    box = {}
    for r1, r2 in itertools.product(reps, repeat=2):
        if len(r1) + len(r2) > bound or not tables[r1] or not tables[r2]:
            continue
        whole = r1 + r2
        sort = _sort_perm(whole)
        fn = derived_boxtimes(A, r1, r2)
        rows = {}
        for a, b in itertools.product(tables[r1], tables[r2]):
            val = fn(A.elements(r1)[a], A.elements(r2)[b])
            rows[(a, b)] = index_in(_apply(whole, sort), act_perm(whole, sort, val))
        box[(r1, r2)] = rows

    zeta = {}
    for r in reps:
        if not tables[r]:
            continue
        for i in range(len(r)):
            for j in range(i + 1, len(r)):
                if r[i] != omega(r[j]):
                    continue
                fn = derived_contraction(A, r, i + 1, j + 1)
                zeta[(r, i, j)] = {
                    a: index_in(_drop(r, i, j), fn(A.elements(r)[a]))
                    for a in tables[r]
                }

    epsilon = {}
    for c in palette.colours:
        val = unit_epsilon(A, c)
        word = (c, omega(c))
        sort = _sort_perm(word)
        epsilon[c] = index_in(_apply(word, sort), act_perm(word, sort, val))

    unit = A.unit_element()
    external = None if unit is None else index_in((), unit)
    return S, make_operad_structure(box, zeta, epsilon, external)


# ---------------------------------------------------------------------------
# bounded free components


_V_CAP, _E_CAP, _X_CAP = 3, 8, 6


def _x_labels_arg(x):
    if isinstance(x, bool):
        raise InvalidParameter("boolean is not a port set")
    if isinstance(x, int):
        if x < 0:
            raise InvalidParameter(f"negative port count {x}")
        return tuple(range(1, x + 1))
    labels = tuple(x)
    for lab in labels:
        label_key(lab)
    if len(set(labels)) != len(labels):
        raise InvalidParameter("port labels repeat")
    return labels


def _multigraph_key(nv, ports_at, loops, mult):
    # complete x_iso invariant for port-attached graphs: the labelled
    # multigraph data up to a permutation of the vertices
    best = None
    for pi in itertools.permutations(range(nv)):
        key = (
            tuple((ports_at[pi[i]], loops[pi[i]]) for i in range(nv)),
            tuple(mult[tuple(sorted((pi[i], pi[j])))]
                  for i in range(nv) for j in range(i + 1, nv)),
        )
        if best is None or key < best:
            best = key
    return best


def _build_class(labels, assign, nv, loops, mult):
    taken = set(labels)
    counter = itertools.count(1)

    def fresh():
        while True:
            s = ("h", next(counter))
            if s not in taken:
                taken.add(s)
                return s

    edges, tau, halves = list(labels), [], []

    def orbit(u, v):
        s1, s2 = fresh(), fresh()
        edges.extend((s1, s2))
        tau.append((s1, s2))
        halves.extend(((s1, u), (s2, v)))

    for lab, v in zip(labels, assign):
        s = fresh()
        edges.append(s)
        tau.append((lab, s))
        halves.append((s, v + 1))
    for v, k in enumerate(loops):
        for _ in range(k):
            orbit(v + 1, v + 1)
    for (u, v), k in mult.items():
        for _ in range(k):
            orbit(u + 1, v + 1)
    g = make_graph(edges, tau, halves, range(1, nv + 1))
    return make_xgraph(g, {lab: lab for lab in labels})


@lru_cache(maxsize=None)
def _enumerate(labels, v_max, e_max):
    budget = e_max - len(labels)  # an orbit per port, plus inner orbits
    classes = {}
    for nv in range(v_max + 1):
        if nv == 0:
            if not labels and budget >= 0:
                classes[_multigraph_key(0, (), (), {})] = ((), 0, (), {})
            continue
        if budget < 0:
            break
        pair_list = list(itertools.combinations(range(nv), 2))
        for assign in itertools.product(range(nv), repeat=len(labels)):
            ports_at = tuple(
                tuple(sorted((label_key(lab) for lab, v in zip(labels, assign)
                              if v == w)))
                for w in range(nv)
            )
            for loops in itertools.product(range(budget + 1), repeat=nv):
                rem = budget - sum(loops)
                if rem < 0:
                    continue
                for counts in itertools.product(range(rem + 1),
                                                repeat=len(pair_list)):
                    if sum(counts) > rem:
                        continue
                    mult = dict(zip(pair_list, counts))
                    key = _multigraph_key(nv, ports_at, loops, mult)
                    if key not in classes:
                        classes[key] = (assign, nv, loops, mult)
    seen = {}
    for assign, nv, loops, mult in classes.values():
        xg = _build_class(labels, assign, nv, loops, mult)
        seen.setdefault(x_certificate(xg), xg)
    return tuple(xg for _, xg in sorted(seen.items(), key=lambda kv: repr(kv[0])))


def enumerate_x_graphs(x, v_max, e_max):
    """Representatives of every admissible graph with this port labelling
    inside the bounds, one per x_iso class, in certificate order.

    e_max caps the orbit count: each port contributes one orbit, so the
    inner budget is e_max minus the number of ports."""
    labels = _x_labels_arg(x)
    if not isinstance(v_max, int) or not isinstance(e_max, int) or \
            isinstance(v_max, bool) or isinstance(e_max, bool) or \
            v_max < 0 or e_max < 0:
        raise InvalidParameter("bounds must be non-negative integers")
    if v_max > _V_CAP or e_max > _E_CAP or len(labels) > _X_CAP:
        raise BoundTooLarge(
            f"bounds capped at v_max={_V_CAP}, e_max={_E_CAP}, |X|={_X_CAP}"
        )
    return _enumerate(labels, v_max, e_max)


def free_component(S, x, v_max, e_max):
    """The bounded free-operad component: structures on every enumerated
    class, tagged by the class index.  Classes whose valencies outrun
    the species bound carry no structures and contribute nothing."""
    out = []
    for idx, xg in enumerate(enumerate_x_graphs(x, v_max, e_max)):
        if any(xg.graph.valency(v) > S.bound for v in xg.graph.vertices):
            continue
        for st in evaluate(S, xg.graph):
            out.append((idx, st))
    return tuple(out)


def contract_free_element(S, x, v_max, e_max, element, px, py):
    """Contraction on the free component: glue the class representative
    at the two named ports and classify the result."""
    reps = enumerate_x_graphs(x, v_max, e_max)
    idx, (colour_items, vertex_items) = element
    xg = reps[idx]
    rho_inv = {lab: p for p, lab in xg.rho}
    if px == py or px not in rho_inv or py not in rho_inv:
        raise InvalidParameter(f"ports {(px, py)!r} are not two distinct labels")
    p1, p2 = rho_inv[px], rho_inv[py]
    old = xg.graph
    kappa = dict(colour_items)
    if kappa[p1] != S.palette.omega(kappa[p2]):
        raise ColourMismatch(
            f"ports {(px, py)!r} carry {(kappa[p1], kappa[p2])!r}, not omega-dual"
        )
    glued = glue(old, p1, p2)

    # the merge classes {p1, tau p2} and {p2, tau p1} keep their smaller
    # label; kappa agrees on the two members of each, so it descends
    members = {}
    for cls in ((p1, old.tau(p2)), (p2, old.tau(p1))):
        members[min(cls, key=label_key)] = cls

    def preimage_at(v, ne):
        for e in members.get(ne, (ne,)):
            if old.edge_vertex.get(e) == v:
                return e
        raise InvalidParameter(f"edge {ne!r} has no preimage at {v!r}")

    alpha = dict(vertex_items)
    new_alpha = []
    for v in glued.vertices:
        old_edges = old.vertex_edges(v)
        pos = {e: i for i, e in enumerate(old_edges)}
        theta = tuple(pos[preimage_at(v, ne)] for ne in glued.vertex_edges(v))
        word = tuple(kappa[e] for e in old_edges)
        new_alpha.append((v, S.transport(word, theta, alpha[v])))
    structure = (
        tuple((e, kappa[members.get(e, (e,))[0]]) for e in glued.edges),
        tuple(new_alpha),
    )

    remaining = tuple(l for l in xg.x_labels if l not in (px, py))
    gx = make_xgraph(glued, {p: lab for p, lab in xg.rho if lab not in (px, py)})
    targets = enumerate_x_graphs(remaining, v_max, e_max)
    cert = x_certificate(gx)
    for jdx, cand in enumerate(targets):
        if x_certificate(cand) == cert:
            return (jdx, transport_structure(S, x_iso(gx, cand), structure))
    raise InvalidParameter("glued graph escaped the enumeration bounds")


def build_free_species(gen, v_max, e_max, bound):
    """Arity tables of the bounded free operad on `gen`, with the
    relabelling actions realized by re-canonicalizing each class."""
    tables = {}
    actions = []
    for n in range(bound + 1):
        labels = tuple(range(1, n + 1))
        reps = enumerate_x_graphs(labels, v_max, e_max)
        cert_index = {x_certificate(xg): i for i, xg in enumerate(reps)}
        by_word = {}
        for idx, xg in enumerate(reps):
            if any(xg.graph.valency(v) > gen.bound for v in xg.graph.vertices):
                continue
            for st in evaluate(gen, xg.graph):
                kappa = dict(st[0])
                word = tuple(kappa[rho_of(xg, k)] for k in labels)
                by_word.setdefault(word, []).append((idx, st))
        for word, els in by_word.items():
            if word != tuple(sort_labels(word)):
                continue  # unsorted words are reached through the actions
            tables[word] = tuple(els)
            for k in range(n - 1):
                if word[k] != word[k + 1]:
                    continue
                perm = list(_identity(n))
                perm[k], perm[k + 1] = perm[k + 1], perm[k]
                perm = tuple(perm)
                inv = _inv(perm)
                mapping = {}
                for idx, st in els:
                    relabel = {p: inv[lab - 1] + 1 for p, lab in reps[idx].rho}
                    moved = make_xgraph(reps[idx].graph, relabel)
                    jdx = cert_index[x_certificate(moved)]
                    wit = x_iso(moved, reps[jdx])
                    mapping[(idx, st)] = (jdx, transport_structure(gen, wit, st))
                actions.append((word, perm, mapping))
    return make_species(gen.palette, bound, tables, actions)


def rho_of(xg, label):
    for p, lab in xg.rho:
        if lab == label:
            return p
    raise InvalidParameter(f"no port labelled {label!r}")


# ---------------------------------------------------------------------------
# presheaf tables and the Segal condition


@dataclass(frozen=True)
class PresheafTable:
    """Finite presheaf fragment: values per listed graph, a cone leg per
    element of each listed graph, and one map per half-edge arrow."""

    graphs: tuple        # ((id, Graph), ...)
    values: tuple        # ((id, elements), ...)
    restrictions: tuple  # ((id, kind, anchor, shape_id, mapping), ...)
    arrows: tuple        # ((id, half_edge, source_id, target_id, mapping), ...)

    @cached_property
    def graph_map(self):
        return dict(self.graphs)

    @cached_property
    def value_map(self):
        return {gid: tuple(es) for gid, es in self.values}

    @cached_property
    def cone_map(self):
        return {(gid, kind, anchor): (sid, dict(mapping))
                for gid, kind, anchor, sid, mapping in self.restrictions}

    @cached_property
    def arrow_map(self):
        return {(gid, he): (src, tgt, dict(mapping))
                for gid, he, src, tgt, mapping in self.arrows}


@dataclass(frozen=True)
class SegalReport:
    passed: bool
    results: tuple  # (graph_id, ok, detail)

    @property
    def failures(self):
        return tuple(gid for gid, ok, _ in self.results if not ok)


def _restrict(S, structure, morphism):
    """Pull a structure back along a graph morphism into a shape."""
    colour_items, vertex_items = structure
    kappa = dict(colour_items)
    alpha = dict(vertex_items)
    shape = morphism.source
    target = morphism.target
    out_alpha = []
    for u in shape.vertices:
        v = morphism.vertex_map[u]
        t_edges = target.vertex_edges(v)
        word = tuple(kappa[e] for e in t_edges)
        pos = {e: i for i, e in enumerate(t_edges)}
        theta = tuple(pos[morphism.edge_map[e]] for e in shape.vertex_edges(u))
        out_alpha.append((u, S.transport(word, theta, alpha[v])))
    return (
        tuple((e, kappa[morphism.edge_map[e]]) for e in shape.edges),
        tuple(out_alpha),
    )


def nerve_presheaf(S, named_graphs):
    """Evaluate S on the listed graphs and tabulate every cone leg and
    element arrow, adding shape graphs as support entries."""
    named = [(gid, g) for gid, g in named_graphs]
    entry_ids = [gid for gid, _ in named]
    if len(set(entry_ids)) != len(entry_ids):
        raise InvalidParameter("duplicate graph ids")
    table = dict(named)
    values = {gid: evaluate(S, g) for gid, g in named}
    by_graph = {}
    for gid, g in named:
        by_graph.setdefault(g, gid)
    counter = itertools.count()

    def ensure(shape):
        if shape in by_graph:
            return by_graph[shape]
        sid = ("shape", next(counter))
        by_graph[shape] = sid
        table[sid] = shape
        values[sid] = evaluate(S, shape)
        return sid

    restrictions = []
    arrows = []
    for gid, g in named:
        els = elements(g)
        shape_ids = []
        for el in els:
            sid = ensure(el.shape)
            shape_ids.append(sid)
            mapping = tuple((st, _restrict(S, st, el.into)) for st in values[gid])
            restrictions.append((gid, el.kind, el.anchor, sid, mapping))
        for ar in element_arrows(g):
            src = shape_ids[ar.corolla_index]
            tgt = shape_ids[ar.stick_index]
            mapping = tuple((st, _restrict(S, st, ar.map)) for st in values[src])
            arrows.append((gid, ar.half_edge, src, tgt, mapping))

    order = {gid: i for i, gid in enumerate(table)}
    return PresheafTable(
        tuple(sorted(table.items(), key=lambda kv: order[kv[0]])),
        tuple(sorted(values.items(), key=lambda kv: order[kv[0]])),
        tuple(restrictions),
        tuple(arrows),
    )


def segal_check(P, graphs=None):
    """Per listed graph: rebuild the value set as the limit of its stick
    and corolla values and test that the cone legs are jointly bijective.

    With no list given, every graph whose cone legs are all present is
    checked; support shapes without cones are left out."""
    if graphs is None:
        ids = [gid for gid, g in P.graphs
               if all((gid, el.kind, el.anchor) in P.cone_map
                      for el in elements(g))]
    else:
        ids = list(graphs)
    results = []
    for gid in ids:
        if gid not in P.graph_map:
            raise InvalidParameter(f"unknown graph id {gid!r}")
        if gid not in P.value_map:
            raise MissingRestriction(f"graph {gid!r} has no value set")
        g = P.graph_map[gid]
        els = elements(g)
        legs = []
        for el in els:
            key = (gid, el.kind, el.anchor)
            if key not in P.cone_map:
                raise MissingRestriction(f"no cone leg for {key!r}")
            sid, mapping = P.cone_map[key]
            if sid not in P.value_map:
                raise MissingRestriction(f"shape {sid!r} has no value set")
            legs.append((sid, mapping))
        arrow_rows = []
        for ar in element_arrows(g):
            key = (gid, ar.half_edge)
            if key not in P.arrow_map:
                raise MissingRestriction(f"no arrow map for {key!r}")
            _, _, mapping = P.arrow_map[key]
            arrow_rows.append((ar.stick_index, ar.corolla_index, mapping))

        limit = []
        for family in itertools.product(*(P.value_map[sid] for sid, _ in legs)):
            if all(mapping.get(family[ci]) == family[si]
                   for si, ci, mapping in arrow_rows):
                limit.append(family)

        image = []
        for alpha in P.value_map[gid]:
            fam = []
            for sid, mapping in legs:
                if alpha not in mapping:
                    raise MissingRestriction(
                        f"cone leg at {gid!r} undefined on one element"
                    )
                fam.append(mapping[alpha])
            image.append(tuple(fam))

        injective = len(set(image)) == len(image)
        onto = set(image) == set(limit)
        ok = injective and onto
        detail = f"{len(image)} elements against a limit of {len(limit)}"
        if not injective:
            detail += "; two elements share a family"
        elif not onto:
            detail += "; the canonical map misses the limit"
        results.append((gid, ok, detail))
    return SegalReport(all(ok for _, ok, _ in results), tuple(results))


# ---------------------------------------------------------------------------
# serialization


def species_to_json(S):
    return {
        "palette": palette_to_json(S.palette),
        "bound": S.bound,
        "tables": [
            {"word": [encode_label(c) for c in w],
             "elements": [encode_label(e) for e in es]}
            for w, es in S.tables
        ],
        "sigma": [
            {"word": [encode_label(c) for c in w],
             "perm": list(perm),
             "map": [[encode_label(a), encode_label(b)] for a, b in mapping]}
            for w, perm, mapping in S.actions
        ],
    }


def species_from_json(obj):
    try:
        palette = palette_from_json(obj["palette"])
        bound = obj["bound"]
        tables = [
            (tuple(decode_label(c) for c in row["word"]),
             tuple(decode_label(e) for e in row["elements"]))
            for row in obj["tables"]
        ]
        actions = [
            (tuple(decode_label(c) for c in row["word"]),
             tuple(row["perm"]),
             tuple((decode_label(a), decode_label(b)) for a, b in row["map"]))
            for row in obj.get("sigma", [])
        ]
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed species document: {exc}") from exc
    return make_species(palette, bound, tables, actions)


def _encode_structure(st):
    return encode_label(st)


def _decode_structure(obj):
    return decode_label(obj)


def presheaf_to_json(P):
    return {
        "graphs": [
            {"id": encode_label(gid), "graph": graph_to_json(g)}
            for gid, g in P.graphs
        ],
        "values": [
            {"id": encode_label(gid),
             "elements": [_encode_structure(e) for e in es]}
            for gid, es in P.values
        ],
        "restrictions": [
            {"graph": encode_label(gid), "kind": kind,
             "anchor": encode_label(anchor), "shape": encode_label(sid),
             "map": [[_encode_structure(a), _encode_structure(b)]
                     for a, b in mapping]}
            for gid, kind, anchor, sid, mapping in P.restrictions
        ],
        "arrows": [
            {"graph": encode_label(gid),
             "edge": encode_label(he[0]), "vertex": encode_label(he[1]),
             "source": encode_label(src), "target": encode_label(tgt),
             "map": [[_encode_structure(a), _encode_structure(b)]
                     for a, b in mapping]}
            for gid, he, src, tgt, mapping in P.arrows
        ],
    }


def presheaf_from_json(obj):
    try:
        graphs = tuple(
            (decode_label(row["id"]), graph_from_json(row["graph"]))
            for row in obj["graphs"]
        )
        values = tuple(
            (decode_label(row["id"]),
             tuple(_decode_structure(e) for e in row["elements"]))
            for row in obj["values"]
        )
        restrictions = tuple(
            (decode_label(row["graph"]), row["kind"], decode_label(row["anchor"]),
             decode_label(row["shape"]),
             tuple((_decode_structure(a), _decode_structure(b))
                   for a, b in row["map"]))
            for row in obj["restrictions"]
        )
        arrows = tuple(
            (decode_label(row["graph"]),
             (decode_label(row["edge"]), decode_label(row["vertex"])),
             decode_label(row["source"]), decode_label(row["target"]),
             tuple((_decode_structure(a), _decode_structure(b))
                   for a, b in row["map"]))
            for row in obj.get("arrows", [])
        )
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed presheaf document: {exc}") from exc
    return PresheafTable(graphs, values, restrictions, arrows)
