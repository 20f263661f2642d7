"""Wiring-diagram operad and Set-valued circuit algebras.

A wiring diagram is a coloured Brauer diagram whose source boundary
is split into typed blocks; it is an operation with one input slot
per block.  operad_gamma substitutes diagrams into slots by tensoring
them side by side and composing into the outer diagram, so the operad
structure is inherited from the monoidal category and its laws hold
on the nose.

Circuit algebras here are Set-valued: finite carriers per colour word
up to an arity bound, plus an action of every wiring diagram within
the bound.  Three flavours: function-backed (action is a callable),
table-backed (extensional tables, validated complete at load time),
and free on a typed generating set (elements are shape/generator
pairs, the action rewires shapes and concatenates generators, so it
never needs the carriers enumerated).  Free elements are stored in a
canonical form that reorders blocks and generator entries together;
without that identification the block-symmetry law could not hold.
Carrier enumeration for the free algebra is a truncation: block
count, source arity, and bubble count are capped, while the action
itself stays exact.

Derived operations: block juxtaposition, contraction of two
omega-dual boundary positions, their composite, and the cap unit.
check_circuit_algebra verifies the operad-algebra axioms (identity,
block equivariance, composition square); check_derived_axioms /
check_downward_algebra verify the product-and-contraction axioms with
or without the unit law.  Checks run exhaustively when the instance
count fits the budget and fall back to seeded sampling otherwise; the
report records mode, seed, and every violation found, in sorted
order.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from math import factorial, prod

from .brauer import BrauerDiagram, is_downward, make_diagram
from .coloured import (
    ColouredBrauerDiagram,
    ColouringError,
    Palette,
    TypeMismatch,
    PaletteMismatch,
    cap_coloured,
    coloured_diagrams,
    coloured_from_json,
    coloured_identity,
    coloured_permutation,
    coloured_to_json,
    compose_coloured,
    input_type,
    make_coloured,
    output_type,
    palette_from_json,
    palette_to_json,
    tensor_coloured,
)
from .labels import decode_label, encode_label, label_key


class BlockMismatch(ValueError):
    pass


class ColourMismatch(ValueError):
    pass


class ArityBoundExceeded(ValueError):
    pass


class MissingActionEntry(ValueError):
    pass


class NotDownward(ValueError):
    pass


@dataclass(frozen=True)
class WiringDiagram:
    diagram: ColouredBrauerDiagram
    block_sizes: tuple

    @property
    def palette(self) -> Palette:
        return self.diagram.palette

    @cached_property
    def block_types(self) -> tuple:
        word = input_type(self.diagram)
        out, at = [], 0
        for size in self.block_sizes:
            out.append(word[at:at + size])
            at += size
        return tuple(out)

    @cached_property
    def output_word(self) -> tuple:
        return output_type(self.diagram)


def make_wiring(diagram: ColouredBrauerDiagram, block_sizes) -> WiringDiagram:
    sizes = tuple(int(b) for b in block_sizes)
    if any(b < 0 for b in sizes):
        raise BlockMismatch(f"negative block size in {sizes!r}")
    if sum(sizes) != diagram.base.m:
        raise BlockMismatch(
            f"blocks {sizes!r} sum to {sum(sizes)}, diagram has {diagram.base.m} inputs"
        )
    return WiringDiagram(diagram, sizes)


def empty_coloured(palette: Palette) -> ColouredBrauerDiagram:
    return make_coloured(palette, make_diagram(0, 0, []), {})


def identity_wiring(palette: Palette, word) -> WiringDiagram:
    word = tuple(word)
    return make_wiring(coloured_identity(palette, word), (len(word),))


def is_downward_wiring(wd: WiringDiagram) -> bool:
    return is_downward(wd.diagram.base)


def operad_gamma(g: WiringDiagram, fs) -> WiringDiagram:
    fs = list(fs)
    if len(fs) != len(g.block_sizes):
        raise BlockMismatch(f"{len(g.block_sizes)} blocks, {len(fs)} arguments")
    for f, want in zip(fs, g.block_types):
        if f.palette != g.palette:
            raise PaletteMismatch("substituting across palettes")
        if f.output_word != want:
            raise TypeMismatch(f"block expects {want!r}, argument yields {f.output_word!r}")
    inner = empty_coloured(g.palette)
    for f in fs:
        inner = tensor_coloured(inner, f.diagram)
    blocks = tuple(b for f in fs for b in f.block_sizes)
    return make_wiring(compose_coloured(inner, g.diagram), blocks)


def _concat_permutation(images, old_sizes):
    # strand permutation induced by putting block images[i] at slot i
    offsets = [0]
    for size in old_sizes:
        offsets.append(offsets[-1] + size)
    out = []
    for b in images:
        base = offsets[b - 1]
        out.extend(range(base + 1, base + old_sizes[b - 1] + 1))
    return tuple(out)


def sigma_action(f: WiringDiagram, sigma) -> WiringDiagram:
    images = tuple(int(i) for i in sigma)
    k = len(f.block_sizes)
    if sorted(images) != list(range(1, k + 1)):
        raise BlockMismatch(f"{images!r} is not a permutation of 1..{k}")
    new_sizes = tuple(f.block_sizes[b - 1] for b in images)
    word = tuple(c for b in images for c in f.block_types[b - 1])
    routed = coloured_permutation(f.palette, _concat_permutation(images, f.block_sizes), word)
    return make_wiring(compose_coloured(routed, f.diagram), new_sizes)


def enumerate_wirings(palette: Palette, block_words, out_words,
                      max_blocks=2, bubble_cap=0, max_points=8):
    """Wiring diagrams with blocks typed from block_words and output
    from out_words, capped in block count, bubbles, and total boundary
    points.  Deterministic order."""
    block_words = [tuple(w) for w in block_words]
    out_words = [tuple(w) for w in out_words]
    found = []
    for k in range(max_blocks + 1):
        for combo in itertools.product(block_words, repeat=k):
            m = sum(map(len, combo))
            flat = sum(combo, ())
            for w in out_words:
                if m + len(w) > max_points:
                    continue
                for d in coloured_diagrams(palette, flat, w, bubble_cap):
                    found.append(make_wiring(d, tuple(map(len, combo))))
    return found


# ---------------------------------------------------------------------------
# algebras


def _word_sort_key(word):
    return (len(word), label_key(tuple(word)))


class CircuitAlgebra:
    """Shared interface: carriers per colour word, action per wiring
    diagram.  Subclasses fill in elements() and _apply()."""

    palette: Palette
    bound: int

    def words(self) -> tuple:
        raise NotImplementedError

    def elements(self, word) -> tuple:
        raise NotImplementedError

    def unit_element(self):
        # canonical inhabitant of the empty word, when there is one
        elems = self.elements(())
        return elems[0] if len(elems) == 1 else None

    def _check_bounds(self, wd: WiringDiagram):
        if wd.palette != self.palette:
            raise PaletteMismatch("wiring diagram over the wrong palette")
        if len(wd.output_word) > self.bound:
            raise ArityBoundExceeded(f"output word longer than bound {self.bound}")
        for w in wd.block_types:
            if len(w) > self.bound:
                raise ArityBoundExceeded(f"block word longer than bound {self.bound}")

    def act(self, wd: WiringDiagram):
        self._check_bounds(wd)
        return lambda inputs: self._apply(wd, tuple(inputs))

    def _apply(self, wd, inputs):
        raise NotImplementedError


class FunctionCircuitAlgebra(CircuitAlgebra):
    def __init__(self, palette, bound, carriers, action, downward_only=False):
        self.palette = palette
        self.bound = int(bound)
        self.carriers = {tuple(w): tuple(xs) for w, xs in carriers.items()}
        for w in self.carriers:
            if len(w) > self.bound:
                raise ArityBoundExceeded(f"carrier word {w!r} longer than bound")
        self.action = action
        self.downward_only = downward_only

    def words(self):
        return tuple(sorted(self.carriers, key=_word_sort_key))

    def elements(self, word):
        return self.carriers.get(tuple(word), ())

    def _apply(self, wd, inputs):
        if self.downward_only and not is_downward_wiring(wd):
            raise NotDownward("algebra only acts on downward wiring diagrams")
        if len(inputs) != len(wd.block_sizes):
            raise BlockMismatch(f"{len(wd.block_sizes)} blocks, {len(inputs)} inputs")
        return self.action(wd, inputs)


class TableCircuitAlgebra(CircuitAlgebra):
    """Extensional action tables; completeness is checked at load."""

    def __init__(self, palette, bound, carriers, entries):
        self.palette = palette
        self.bound = int(bound)
        self.carriers = {tuple(w): tuple(xs) for w, xs in carriers.items()}
        self.table = {}
        for wd, rows in entries:
            rows = dict(rows)
            for w in wd.block_types + (wd.output_word,):
                if w not in self.carriers:
                    raise MissingActionEntry(f"no carrier for word {w!r}")
            domain = list(itertools.product(*(self.carriers[w] for w in wd.block_types)))
            for combo in domain:
                if combo not in rows:
                    raise MissingActionEntry(f"table for {wd} misses inputs {combo!r}")
                if rows[combo] not in self.carriers[wd.output_word]:
                    raise MissingActionEntry(
                        f"table output {rows[combo]!r} outside carrier {wd.output_word!r}"
                    )
            if len(rows) != len(domain):
                raise MissingActionEntry(f"table for {wd} has spurious rows")
            self.table[wd] = rows

    def words(self):
        return tuple(sorted(self.carriers, key=_word_sort_key))

    def elements(self, word):
        return self.carriers.get(tuple(word), ())

    def listed_wirings(self):
        return tuple(self.table)

    def _apply(self, wd, inputs):
        if wd not in self.table:
            raise MissingActionEntry(f"no table entry for {wd}")
        return self.table[wd][inputs]


@dataclass(frozen=True)
class FreeCAElement:
    shape: WiringDiagram
    generators: tuple

    @property
    def word(self) -> tuple:
        return self.shape.output_word


def _free_key(shape: WiringDiagram, gens: tuple):
    return (json.dumps(wiring_to_json(shape), sort_keys=True), label_key(gens))


def free_element(shape: WiringDiagram, generators) -> FreeCAElement:
    """Canonical representative of (shape, generators) under the
    simultaneous reordering of blocks and generator entries.  Without
    this identification the free algebra could not be equivariant, so
    equality of free elements is equality of canonical forms."""
    gens = tuple(generators)
    k = len(shape.block_sizes)
    if len(gens) != k:
        raise BlockMismatch(f"{k} blocks, {len(gens)} generators")
    if k <= 1:
        return FreeCAElement(shape, gens)
    best = None
    for sigma in itertools.permutations(range(1, k + 1)):
        cand_shape = sigma_action(shape, sigma)
        cand_gens = tuple(gens[b - 1] for b in sigma)
        key = _free_key(cand_shape, cand_gens)
        if best is None or key < best[0]:
            best = (key, cand_shape, cand_gens)
    return FreeCAElement(best[1], best[2])


class FreeCircuitAlgebra(CircuitAlgebra):
    """Free algebra on typed generators.  The action is symbolic, so
    carriers only matter for enumeration and are truncated by block
    count, source arity (the bound), and bubble cap."""

    def __init__(self, palette, bound, generators, max_blocks=None,
                 bubble_cap=1, downward_only=False):
        self.palette = palette
        self.bound = int(bound)
        self.generators = {tuple(w): tuple(g) for w, g in generators.items()}
        for w in self.generators:
            if len(w) > self.bound:
                raise ArityBoundExceeded(f"generator word {w!r} longer than bound")
        self.max_blocks = self.bound if max_blocks is None else int(max_blocks)
        self.bubble_cap = int(bubble_cap)
        self.downward_only = downward_only
        self._cache = {}

    def words(self):
        out = []
        for k in range(self.bound + 1):
            out.extend(itertools.product(self.palette.colours, repeat=k))
        return tuple(sorted(out, key=_word_sort_key))

    def elements(self, word):
        word = tuple(word)
        if word in self._cache:
            return self._cache[word]
        if len(word) > self.bound:
            raise ArityBoundExceeded(f"word {word!r} longer than bound {self.bound}")
        gen_words = sorted(self.generators, key=_word_sort_key)
        out, seen = [], set()
        for k in range(self.max_blocks + 1):
            for combo in itertools.product(gen_words, repeat=k):
                flat = sum(combo, ())
                if len(flat) > self.bound:
                    continue
                for d in coloured_diagrams(self.palette, flat, word, self.bubble_cap):
                    if self.downward_only and not is_downward(d.base):
                        continue
                    shape = make_wiring(d, tuple(map(len, combo)))
                    for gens in itertools.product(*(self.generators[w] for w in combo)):
                        e = free_element(shape, gens)
                        if e not in seen:
                            seen.add(e)
                            out.append(e)
        self._cache[word] = tuple(out)
        return self._cache[word]

    def unit_element(self):
        return FreeCAElement(make_wiring(empty_coloured(self.palette), ()), ())

    def _apply(self, wd, inputs):
        if self.downward_only and not is_downward_wiring(wd):
            raise NotDownward("algebra only acts on downward wiring diagrams")
        shape = operad_gamma(wd, [x.shape for x in inputs])
        gens = tuple(g for x in inputs for g in x.generators)
        return free_element(shape, gens)


def free_circuit_algebra(palette, bound, generators, max_blocks=None,
                         bubble_cap=1, downward_only=False) -> FreeCircuitAlgebra:
    return FreeCircuitAlgebra(palette, bound, generators, max_blocks,
                              bubble_cap, downward_only)


def one_point_algebra(palette: Palette, bound: int) -> FunctionCircuitAlgebra:
    carriers = {}
    for k in range(bound + 1):
        for w in itertools.product(palette.colours, repeat=k):
            carriers[w] = ("*",)
    return FunctionCircuitAlgebra(palette, bound, carriers, lambda wd, inputs: "*")


def pairing_algebra(palette: Palette, bound: int,
                    downward_only=False) -> FunctionCircuitAlgebra:
    """Carriers: colour-consistent pairings on each word (diagrams
    with no inputs and no bubbles).  A wiring diagram acts by plugging
    the pairings into its blocks, composing, and discarding whatever
    bubbles form.  Discarding is consistent: bubbles never touch the
    open part again, so the composition square holds."""
    carriers = {}
    for k in range(bound + 1):
        for w in itertools.product(palette.colours, repeat=k):
            carriers[w] = tuple(coloured_diagrams(palette, (), w))

    def action(wd, inputs):
        inner = empty_coloured(palette)
        for x in inputs:
            inner = tensor_coloured(inner, x)
        full = compose_coloured(inner, wd.diagram)
        # full has no sources, so zeroing the closed count discards the
        # bubbles and keeps the open part as-is; no revalidation needed
        open_base = BrauerDiagram(0, full.base.n, full.base.pairs, 0)
        return ColouredBrauerDiagram(palette, open_base, full.boundary_colour, ())

    return FunctionCircuitAlgebra(palette, bound, carriers, action,
                                  downward_only=downward_only)


def tabulate(A: CircuitAlgebra, wirings) -> TableCircuitAlgebra:
    carriers = {w: A.elements(w) for w in A.words()}
    entries = []
    for wd in wirings:
        fn = A.act(wd)
        rows = {}
        for combo in itertools.product(*(A.elements(w) for w in wd.block_types)):
            rows[combo] = fn(combo)
        entries.append((wd, rows))
    return TableCircuitAlgebra(A.palette, A.bound, carriers, entries)


# ---------------------------------------------------------------------------
# derived operations


def derived_boxtimes(A: CircuitAlgebra, c_word, d_word):
    c_word, d_word = tuple(c_word), tuple(d_word)
    if len(c_word) + len(d_word) > A.bound:
        raise ArityBoundExceeded(f"|{c_word!r}| + |{d_word!r}| exceeds bound {A.bound}")
    wd = make_wiring(coloured_identity(A.palette, c_word + d_word),
                     (len(c_word), len(d_word)))
    fn = A.act(wd)
    return lambda a, b: fn((a, b))


def contraction_wiring(palette: Palette, word, i: int, j: int) -> WiringDiagram:
    word = tuple(word)
    m = len(word)
    if not (1 <= i < j <= m):
        raise IndexError(f"positions {(i, j)!r} out of range for length {m}")
    if word[i - 1] != palette.omega(word[j - 1]):
        raise ColourMismatch(
            f"positions {i},{j} carry {word[i - 1]!r},{word[j - 1]!r}, not omega-dual"
        )
    colours = {}
    pairs = [(f"s{i}", f"s{j}")]
    for r, c in enumerate(word, start=1):
        colours[f"s{r}"] = palette.omega(c)
        if r in (i, j):
            continue
        rank = r - (r > i) - (r > j)
        colours[f"t{rank}"] = c
        pairs.append((f"s{r}", f"t{rank}"))
    base = make_diagram(m, m - 2, pairs)
    return make_wiring(make_coloured(palette, base, colours), (m,))


def derived_contraction(A: CircuitAlgebra, word, i: int, j: int):
    fn = A.act(contraction_wiring(A.palette, word, i, j))
    return lambda a: fn((a,))


def derived_diamond(A: CircuitAlgebra, c_word, d_word, i: int, j: int):
    c_word, d_word = tuple(c_word), tuple(d_word)
    if not (1 <= i <= len(c_word) and 1 <= j <= len(d_word)):
        raise IndexError(f"positions {(i, j)!r} out of range")
    if c_word[i - 1] != A.palette.omega(d_word[j - 1]):
        raise ColourMismatch(
            f"{c_word[i - 1]!r} at {i} and {d_word[j - 1]!r} at {j} are not omega-dual"
        )
    box = derived_boxtimes(A, c_word, d_word)
    zeta = derived_contraction(A, c_word + d_word, i, len(c_word) + j)
    return lambda a, b: zeta(box(a, b))


def unit_epsilon(A: CircuitAlgebra, colour):
    wd = make_wiring(cap_coloured(A.palette, (colour,)), ())
    return A.act(wd)(())


def reinsertion_wiring(palette: Palette, word, i: int) -> WiringDiagram:
    # route the last strand back into slot i of the target word
    word = tuple(word)
    m = len(word)
    u = word[:i - 1] + word[i:] + (word[i - 1],)
    images = list(range(1, i)) + list(range(i + 1, m + 1)) + [i]
    return make_wiring(coloured_permutation(palette, images, u), (m,))


# ---------------------------------------------------------------------------
# checkers


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    mode: str  # "exhaustive" or "sampled"
    seed: int
    candidates: int
    checked: int
    violations: tuple


def _wd_brief(wd: WiringDiagram) -> str:
    return json.dumps(wiring_to_json(wd), sort_keys=True)


def check_circuit_algebra(A: CircuitAlgebra, seed=0, budget=100_000, samples=400,
                          max_blocks=2, bubble_cap=0, max_points=8,
                          universe=None) -> CheckReport:
    """Operad-algebra axioms: identity action, block equivariance,
    composition square.  Exhaustive when the instance count fits the
    budget, seeded sampling otherwise."""
    words = [w for w in A.words()]
    sizes = {w: len(A.elements(w)) for w in words}
    if universe is None:
        if hasattr(A, "listed_wirings"):
            universe = list(A.listed_wirings())
        else:
            universe = enumerate_wirings(A.palette, words, words,
                                         max_blocks, bubble_cap, max_points)
    universe = [wd for wd in universe
                if all(w in sizes for w in wd.block_types) and wd.output_word in sizes]
    by_output = defaultdict(list)
    for wd in universe:
        by_output[wd.output_word].append(wd)

    id_count = sum(sizes.values())
    eq_count = sum(factorial(len(wd.block_sizes)) * prod(sizes[w] for w in wd.block_types)
                   for wd in universe)
    slot_total = {w: sum(prod(sizes[b] for b in f.block_types) for f in by_output[w])
                  for w in words}
    comp_count = sum(prod(slot_total[w] for w in g.block_types) for g in universe)
    candidates = id_count + eq_count + comp_count

    violations = []
    checked = 0

    # table algebras raise MissingActionEntry on first application; those
    # instances are skipped (only listed diagrams are checkable), so checked
    # counts successful evaluations only
    _missing = object()

    def check_identity(act_id, word, x):
        nonlocal checked
        try:
            y = act_id((x,))
        except MissingActionEntry:
            return
        checked += 1
        if y != x:
            violations.append(f"identity on {word!r}: {x!r} acted to {y!r}")

    def check_equivariance(lhs, rhs, wd, sigma, inputs):
        nonlocal checked
        if lhs is _missing or rhs is _missing:
            return
        checked += 1
        if lhs != rhs:
            violations.append(
                f"equivariance: wd={_wd_brief(wd)} sigma={sigma!r} "
                f"inputs={inputs!r}: {lhs!r} != {rhs!r}"
            )

    def check_composition(lhs, rhs, g, fs, nested):
        nonlocal checked
        if lhs is _missing or rhs is _missing:
            return
        checked += 1
        if lhs != rhs:
            violations.append(
                f"composition: g={_wd_brief(g)} fs={[_wd_brief(f) for f in fs]!r} "
                f"inputs={nested!r}: {lhs!r} != {rhs!r}"
            )

    def identity_act(word):
        return A.act(identity_wiring(A.palette, word))

    def apply_or_missing(fn, inputs):
        try:
            return fn(inputs)
        except MissingActionEntry:
            return _missing

    eval_cache = {}

    def evaluated_domain(f):
        # one full sweep of f's input domain: chunk -> action value.  The
        # sweeps are shared across phases; a composite equal to an already
        # swept wiring (unit laws produce many) costs nothing extra.
        got = eval_cache.get(f)
        if got is None:
            act_f = A.act(f)
            dom = itertools.product(*(A.elements(w) for w in f.block_types))
            got = eval_cache[f] = [(chunk, apply_or_missing(act_f, chunk))
                                   for chunk in dom]
        return got

    if candidates <= budget:
        mode = "exhaustive"
        for w in words:
            act_id = identity_act(w)
            for x in A.elements(w):
                check_identity(act_id, w, x)
        for wd in universe:
            k = len(wd.block_sizes)
            evaluated = evaluated_domain(wd)
            if not evaluated:
                continue
            for sigma in itertools.permutations(range(1, k + 1)):
                sig_map = dict(evaluated_domain(sigma_action(wd, sigma)))
                for inputs, rhs in evaluated:
                    moved = tuple(inputs[b - 1] for b in sigma)
                    check_equivariance(sig_map.get(moved, _missing), rhs,
                                       wd, sigma, inputs)
        for g in universe:
            # pairs with an uninhabited inner domain contribute no instances
            fs_pools = [[f for f in by_output[w]
                         if all(sizes[b] for b in f.block_types)]
                        for w in g.block_types]
            if not all(fs_pools):
                continue
            g_map = dict(evaluated_domain(g))
            for fs in itertools.product(*fs_pools):
                # the composite's domain is the product of the inner domains
                # in the same order, so the two iterations stay in step
                comp_pairs = evaluated_domain(operad_gamma(g, fs))
                evaluated = [evaluated_domain(f) for f in fs]
                for nested_pairs, (_, lhs) in zip(
                        itertools.product(*evaluated), comp_pairs):
                    values = tuple(v for _, v in nested_pairs)
                    rhs = (_missing if any(v is _missing for v in values)
                           else g_map.get(values, _missing))
                    nested = tuple(chunk for chunk, _ in nested_pairs)
                    check_composition(lhs, rhs, g, fs, nested)
    else:
        mode = "sampled"
        rng = random.Random(seed)
        inhabited = [w for w in words if sizes[w]]
        for _ in range(samples):
            if inhabited:
                w = inhabited[rng.randrange(len(inhabited))]
                xs = A.elements(w)
                check_identity(identity_act(w), w, xs[rng.randrange(len(xs))])
        usable = [wd for wd in universe if all(sizes[w] for w in wd.block_types)]
        for _ in range(samples):
            if not usable:
                break
            wd = usable[rng.randrange(len(usable))]
            k = len(wd.block_sizes)
            sigma = list(range(1, k + 1))
            rng.shuffle(sigma)
            sigma = tuple(sigma)
            inputs = tuple(A.elements(w)[rng.randrange(sizes[w])] for w in wd.block_types)
            moved = tuple(inputs[b - 1] for b in sigma)
            lhs = apply_or_missing(A.act(sigma_action(wd, sigma)), moved)
            rhs = apply_or_missing(A.act(wd), inputs)
            check_equivariance(lhs, rhs, wd, sigma, inputs)
        comp_ok = [g for g in universe
                   if all(slot_total[w] for w in g.block_types)]
        for _ in range(samples):
            if not comp_ok:
                break
            g = comp_ok[rng.randrange(len(comp_ok))]
            fs, nested = [], []
            viable = True
            for w in g.block_types:
                pool = [f for f in by_output[w] if all(sizes[b] for b in f.block_types)]
                if not pool:
                    viable = False
                    break
                f = pool[rng.randrange(len(pool))]
                fs.append(f)
                nested.append(tuple(A.elements(b)[rng.randrange(sizes[b])]
                                    for b in f.block_types))
            if viable:
                fs = tuple(fs)
                flat = tuple(x for chunk in nested for x in chunk)
                lhs = apply_or_missing(A.act(operad_gamma(g, fs)), flat)
                values = tuple(apply_or_missing(A.act(f), chunk)
                               for f, chunk in zip(fs, nested))
                rhs = (_missing if any(v is _missing for v in values)
                       else apply_or_missing(A.act(g), values))
                check_composition(lhs, rhs, g, fs, tuple(nested))

    violations.sort()
    return CheckReport(not violations, mode, seed, candidates, checked, tuple(violations))


def _contraction_slots(palette, word):
    m = len(word)
    return [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)
            if word[i - 1] == palette.omega(word[j - 1])]


def _shift_pair(pair, removed):
    i, j = pair
    si = i - sum(1 for r in removed if r < i)
    sj = j - sum(1 for r in removed if r < j)
    return si, sj


def _without(word, i, j):
    return tuple(c for r, c in enumerate(word, start=1) if r not in (i, j))


def _derived_report(A: CircuitAlgebra, with_e1: bool, seed=0, budget=100_000,
                    samples=300) -> CheckReport:
    words = [w for w in A.words() if A.elements(w)]
    sizes = {w: len(A.elements(w)) for w in words}
    unit = A.unit_element()

    assoc_types = [(u, v, w) for u in words for v in words for w in words
                   if len(u) + len(v) + len(w) <= A.bound]
    unit_types = words if unit is not None else []
    zeta_types = []
    for w in words:
        slots = _contraction_slots(A.palette, w)
        for p, q in itertools.combinations(slots, 2):
            if not set(p) & set(q):
                zeta_types.append((w, p, q))
    mix_types = []
    for u in words:
        for p in _contraction_slots(A.palette, u):
            for v in words:
                if len(u) + len(v) <= A.bound:
                    mix_types.append((u, p, v))
    e1_types = []
    if with_e1:
        for w in words:
            if len(w) + 2 > A.bound:
                continue
            for i in range(1, len(w) + 1):
                e1_types.append((w, i))

    candidates = (
        sum(sizes[u] * sizes[v] * sizes[w] for u, v, w in assoc_types)
        + 2 * sum(sizes[w] for w in unit_types)
        + sum(sizes[w] for w, _, _ in zeta_types)
        + sum(sizes[u] * sizes[v] for u, _, v in mix_types)
        + sum(sizes[w] for w, _ in e1_types)
    )

    violations = []
    checked = 0

    def check_assoc(u, v, w, a, b, c):
        nonlocal checked
        checked += 1
        lhs = derived_boxtimes(A, u + v, w)(derived_boxtimes(A, u, v)(a, b), c)
        rhs = derived_boxtimes(A, u, v + w)(a, derived_boxtimes(A, v, w)(b, c))
        if lhs != rhs:
            violations.append(f"c1 assoc at {(u, v, w)!r} on {(a, b, c)!r}: {lhs!r} != {rhs!r}")

    def check_unit(w, a):
        nonlocal checked
        checked += 2
        right = derived_boxtimes(A, w, ())(a, unit)
        left = derived_boxtimes(A, (), w)(unit, a)
        if right != a or left != a:
            violations.append(f"c1 unit at {w!r} on {a!r}: {left!r}, {right!r}")

    def check_zeta_commute(w, p, q, a):
        nonlocal checked
        checked += 1
        first_p = derived_contraction(A, _without(w, *p), *_shift_pair(q, p))(
            derived_contraction(A, w, *p)(a))
        first_q = derived_contraction(A, _without(w, *q), *_shift_pair(p, q))(
            derived_contraction(A, w, *q)(a))
        if first_p != first_q:
            violations.append(f"c2 at {w!r} {p!r},{q!r} on {a!r}: {first_p!r} != {first_q!r}")

    def check_zeta_box(u, p, v, a, b):
        nonlocal checked
        checked += 1
        i, j = p
        lhs = derived_boxtimes(A, _without(u, i, j), v)(
            derived_contraction(A, u, i, j)(a), b)
        rhs = derived_contraction(A, u + v, i, j)(derived_boxtimes(A, u, v)(a, b))
        if lhs != rhs:
            violations.append(f"c3 at {(u, p, v)!r} on {(a, b)!r}: {lhs!r} != {rhs!r}")

    def check_e1(w, i, a):
        nonlocal checked
        checked += 1
        c = w[i - 1]
        eps = unit_epsilon(A, c)
        boxed = derived_boxtimes(A, w, (c, A.palette.omega(c)))(a, eps)
        cut = derived_contraction(A, w + (c, A.palette.omega(c)), i, len(w) + 2)(boxed)
        back = A.act(reinsertion_wiring(A.palette, w, i))((cut,))
        if back != a:
            violations.append(f"e1 at {w!r} slot {i} on {a!r}: {back!r}")

    if candidates <= budget:
        mode = "exhaustive"
        for u, v, w in assoc_types:
            for a in A.elements(u):
                for b in A.elements(v):
                    for c in A.elements(w):
                        check_assoc(u, v, w, a, b, c)
        for w in unit_types:
            for a in A.elements(w):
                check_unit(w, a)
        for w, p, q in zeta_types:
            for a in A.elements(w):
                check_zeta_commute(w, p, q, a)
        for u, p, v in mix_types:
            for a in A.elements(u):
                for b in A.elements(v):
                    check_zeta_box(u, p, v, a, b)
        for w, i in e1_types:
            for a in A.elements(w):
                check_e1(w, i, a)
    else:
        mode = "sampled"
        rng = random.Random(seed)

        def pick(w):
            xs = A.elements(w)
            return xs[rng.randrange(len(xs))]

        for _ in range(samples):
            if assoc_types:
                u, v, w = assoc_types[rng.randrange(len(assoc_types))]
                check_assoc(u, v, w, pick(u), pick(v), pick(w))
            if unit_types:
                w = unit_types[rng.randrange(len(unit_types))]
                check_unit(w, pick(w))
            if zeta_types:
                w, p, q = zeta_types[rng.randrange(len(zeta_types))]
                check_zeta_commute(w, p, q, pick(w))
            if mix_types:
                u, p, v = mix_types[rng.randrange(len(mix_types))]
                check_zeta_box(u, p, v, pick(u), pick(v))
            if e1_types:
                w, i = e1_types[rng.randrange(len(e1_types))]
                check_e1(w, i, pick(w))

    violations.sort()
    return CheckReport(not violations, mode, seed, candidates, checked, tuple(violations))


def check_derived_axioms(A: CircuitAlgebra, seed=0, budget=100_000,
                         samples=300) -> CheckReport:
    return _derived_report(A, with_e1=True, seed=seed, budget=budget, samples=samples)


def check_downward_algebra(A: CircuitAlgebra, seed=0, budget=100_000,
                           samples=300) -> CheckReport:
    """Product and contraction axioms only; no unit probe, so it is
    meaningful for algebras defined on downward diagrams alone."""
    return _derived_report(A, with_e1=False, seed=seed, budget=budget, samples=samples)


# ---------------------------------------------------------------------------
# io


def wiring_to_json(wd: WiringDiagram) -> dict:
    blob = coloured_to_json(wd.diagram)
    blob["blocks"] = list(wd.block_sizes)
    return blob


def wiring_from_json(obj: dict) -> WiringDiagram:
    if "blocks" not in obj:
        raise BlockMismatch(f"wiring diagram object lacks blocks: {obj!r}")
    return make_wiring(coloured_from_json(obj), obj["blocks"])


def _word_key(word) -> str:
    return json.dumps([encode_label(c) for c in word])


def _word_unkey(key: str) -> tuple:
    return tuple(decode_label(c) for c in json.loads(key))


def algebra_to_json(A: TableCircuitAlgebra) -> dict:
    entries = []
    for wd, rows in A.table.items():
        table = [[encode_label(x) for x in combo] + [encode_label(out)]
                 for combo, out in sorted(rows.items(), key=lambda kv: label_key(kv[0]))]
        entries.append({"wd": wiring_to_json(wd), "table": table})
    return {
        "palette": palette_to_json(A.palette),
        "bound": A.bound,
        "carriers": {_word_key(w): [encode_label(x) for x in xs]
                     for w, xs in sorted(A.carriers.items(), key=lambda kv: _word_sort_key(kv[0]))},
        "action": entries,
    }


def algebra_from_json(obj: dict) -> TableCircuitAlgebra:
    try:
        palette = palette_from_json(obj["palette"])
        bound = int(obj["bound"])
        carriers = {_word_unkey(k): tuple(decode_label(x) for x in xs)
                    for k, xs in obj["carriers"].items()}
        entries = []
        for entry in obj["action"]:
            wd = wiring_from_json(entry["wd"])
            rows = {}
            for row in entry["table"]:
                *ins, out = row
                rows[tuple(decode_label(x) for x in ins)] = decode_label(out)
            entries.append((wd, rows))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (ColouringError, BlockMismatch, MissingActionEntry)):
            raise
        raise MissingActionEntry(f"not a circuit algebra object: {exc}") from exc
    return TableCircuitAlgebra(palette, bound, carriers, entries)
