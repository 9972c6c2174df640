"""Independent reference implementations used by the test-suite.

Nothing here calls the library's canonical form, matcher or slice-pass
evaluators; they only share the plain data types.
"""
from __future__ import annotations

import random
from collections import Counter, deque
from itertools import product

from polygraph3.circuit import GeneratorDecl, Slice
from polygraph3.multiset import Multiset


# -- exchange classes -------------------------------------------------------

def _swaps(upper, lower):
    (p, a), (q, b) = upper, lower
    res = set()
    if q + b.arity_in <= p:
        res.add(((q, b), (p - b.arity_in + b.arity_out, a)))
    if q >= p + a.arity_out:
        res.add(((q - a.arity_out + a.arity_in, b), (p, a)))
    return res


def exchange_class(word, limit=200_000):
    """Every word reachable from ``word`` by adjacent exchanges (BFS).

    Words are tuples of ``(pad, GeneratorDecl)`` or ``(pad, gen, tag)``.
    """
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            for new_up, new_low in _swaps(w[i][:2], w[i + 1][:2]):
                up = new_up + w[i + 1][2:]
                low = new_low + w[i][2:]
                v = w[:i] + (up, low) + w[i + 2:]
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
                    if len(seen) > limit:
                        raise RuntimeError("exchange class too large")
    return seen


def word_key(word):
    return tuple((p, g.name, g.arity_in, g.arity_out) for p, g, *_ in word)


def least_word(word):
    return min(exchange_class(word), key=word_key)


def to_pairs(slices):
    return tuple((s.pad, s.gen) for s in slices)


def to_slices(word):
    return tuple(Slice(p, g) for p, g, *_ in word)


# -- random words -------------------------------------------------------------

def random_signature(rng: random.Random, size: int, max_arity: int = 3):
    return [GeneratorDecl(f"g{i}", rng.randint(0, max_arity), rng.randint(0, max_arity))
            for i in range(size)]


def random_word(rng: random.Random, gens, n_slices: int, inputs: int, max_width: int = 6):
    """A random well-formed slice word with at most ``n_slices`` slices."""
    w = inputs
    word = []
    for _ in range(n_slices):
        fits = [g for g in gens if g.arity_in <= w and w - g.arity_in + g.arity_out <= max_width]
        if not fits:
            break
        g = rng.choice(fits)
        p = rng.randint(0, w - g.arity_in)
        word.append((p, g))
        w = w - g.arity_in + g.arity_out
    return tuple(word), w


def random_walk(rng: random.Random, word, steps: int):
    w = tuple(word)
    for _ in range(steps):
        if len(w) < 2:
            break
        i = rng.randrange(len(w) - 1)
        opts = sorted(_swaps(w[i], w[i + 1]), key=lambda pr: (pr[0][0], pr[1][0]))
        if opts:
            up, low = rng.choice(opts)
            w = w[:i] + (up, low) + w[i + 2:]
    return w


# -- structural recursion evaluator ------------------------------------------

class Tree:
    """Binary ⋆0/⋆1 expression over generators and identities."""

    def __init__(self, kind, *args):
        self.kind = kind  # 'gen', 'id', 'h', 'v'
        self.args = args
        if kind == "gen":
            g = args[0]
            self.m, self.n = g.arity_in, g.arity_out
        elif kind == "id":
            self.m = self.n = args[0]
        elif kind == "h":
            a, b = args
            self.m, self.n = a.m + b.m, a.n + b.n
        else:
            a, b = args
            assert a.n == b.m
            self.m, self.n = a.m, b.n


def random_tree(rng: random.Random, word, inputs):
    """Random parenthesization of a slice word as a ⋆0/⋆1 tree."""
    widths = [inputs]
    for p, g in word:
        widths.append(widths[-1] - g.arity_in + g.arity_out)

    def slice_tree(k):
        p, g = word[k]
        right = widths[k] - p - g.arity_in
        core = Tree("gen", g)
        left_t, right_t = Tree("id", p), Tree("id", right)
        if rng.random() < 0.5:
            return Tree("h", left_t, Tree("h", core, right_t))
        return Tree("h", Tree("h", left_t, core), right_t)

    def build(lo, hi):
        if hi - lo == 0:
            return Tree("id", widths[lo])
        if hi - lo == 1:
            return slice_tree(lo)
        mid = rng.randint(lo + 1, hi - 1)
        return Tree("v", build(lo, mid), build(mid, hi))

    return build(0, len(word))


def tree_down(t, assignment, x):
    if t.kind == "id":
        return tuple(x)
    if t.kind == "gen":
        return assignment[t.args[0].name].down_values(x)
    a, b = t.args
    if t.kind == "h":
        return tree_down(a, assignment, x[:a.m]) + tree_down(b, assignment, x[a.m:])
    return tree_down(b, assignment, tree_down(a, assignment, x))


def tree_up(t, assignment, y):
    if t.kind == "id":
        return tuple(y)
    if t.kind == "gen":
        return assignment[t.args[0].name].up_values(y)
    a, b = t.args
    if t.kind == "h":
        return tree_up(a, assignment, y[:a.n]) + tree_up(b, assignment, y[a.n:])
    return tree_up(a, assignment, tree_up(b, assignment, y))


def tree_heat(t, assignment, x, y):
    if t.kind == "id":
        return Multiset()
    if t.kind == "gen":
        return assignment[t.args[0].name].heat_value(x, y)
    a, b = t.args
    if t.kind == "h":
        return (tree_heat(a, assignment, x[:a.m], y[:a.n])
                + tree_heat(b, assignment, x[a.m:], y[a.n:]))
    # [a ⋆1 b](x, y) = [a](x, b^*(y)) + [b](a_*(x), y)
    return (tree_heat(a, assignment, x, tree_up(b, assignment, y))
            + tree_heat(b, assignment, tree_down(a, assignment, x), y))


# -- multiset order -----------------------------------------------------------

def dershowitz_manna_greater(a, b) -> bool:
    """a > b iff a != b and every element of b - a is dominated in a - b."""
    ca, cb = Counter(a), Counter(b)
    if ca == cb:
        return False
    only_a = ca - cb
    only_b = cb - ca
    return all(any(x > y for x in only_a) for y in only_b)


# -- brute-force matching -----------------------------------------------------

_TAGGED_CACHE: dict = {}
_LHS_CACHE: dict = {}


def tagged_class(f):
    """Exchange class of f's word where each slice carries its index.

    Each entry is ``(word, plain keys, marked keys, widths)``: the keys are
    per-slice ``word_key`` entries with the generator name left alone or
    suffixed by ``#``.
    """
    key = (f.inputs, tuple(f.slices))
    got = _TAGGED_CACHE.get(key)
    if got is None:
        if len(_TAGGED_CACHE) > 256:
            _TAGGED_CACHE.clear()
        tagged = tuple((s.pad, s.gen, i) for i, s in enumerate(f.slices))
        got = []
        for w in exchange_class(tagged):
            plain = tuple((p, g.name, g.arity_in, g.arity_out) for p, g, _ in w)
            marked = tuple((p, g.name + "#", g.arity_in, g.arity_out) for p, g, _ in w)
            widths = [f.inputs]
            for _, g, _ in w:
                widths.append(widths[-1] - g.arity_in + g.arity_out)
            got.append((w, plain, marked, widths))
        _TAGGED_CACHE[key] = got
    return got


def _lhs_shapes(lhs):
    """``{pad-relative keys of an lhs word: its possible first pads}``."""
    key = (lhs.inputs, tuple(lhs.slices))
    got = _LHS_CACHE.get(key)
    if got is None:
        got = {}
        for w in exchange_class(to_pairs(lhs.slices)):
            k = word_key(w)
            first = k[0][0]
            got.setdefault(tuple((p - first, *rest) for p, *rest in k), set()).add(first)
        _LHS_CACHE[key] = got
    return got


def brute_force_occurrence_classes(f, lhs):
    """Isotopy classes of decompositions h ; (id_p * lhs * id_q) ; k.

    Returns ``{least word key: every word key of the class}``.

    Enumerates the full exchange class of f's word with occurrence tags,
    looks at every contiguous block and keeps the blocks that are a shifted
    word isotopic to lhs, with the shift leaving room for lhs inside the
    width at that height.  Two decompositions are identified when their
    marked diagrams (block slices renamed) have the same least word.
    """
    words = tagged_class(f)
    shapes = _lhs_shapes(lhs)
    t = len(lhs.slices)
    found = set()
    for w, plain, _, widths in words:
        for start in range(len(w) - t + 1):
            tags = frozenset(tag for _, _, tag in w[start:start + t])
            if tags in found:
                continue
            block = plain[start:start + t]
            first = block[0][0]
            rel = tuple((p - first, *rest) for p, *rest in block)
            if rel not in shapes:
                continue
            if any(0 <= first - f0 <= widths[start] - lhs.inputs for f0 in shapes[rel]):
                found.add(tags)
    classes = {}
    for tags in found:
        members = frozenset(
            tuple(m if w[i][2] in tags else pl for i, (pl, m) in enumerate(zip(plain, marked)))
            for w, plain, marked, _ in words)
        classes[min(members)] = members
    return classes


def occurrence_class(classes, h, lhs, p, k):
    """Key of the oracle class containing the marked word ``h ; lhs ; k``."""
    word = [(s.pad, s.gen) for s in h.slices]
    word += [(s.pad + p, GeneratorDecl(f"{s.gen.name}#", s.gen.arity_in, s.gen.arity_out))
             for s in lhs.slices]
    word += [(s.pad, s.gen) for s in k.slices]
    key = word_key(word)
    for least, members in classes.items():
        if key in members:
            return least
    return None


def marked_key(f, tags):
    """Least word of f with the occurrences in ``tags`` marked."""
    return min(tuple(m if w[i][2] in tags else pl for i, (pl, m) in enumerate(zip(plain, marked)))
               for w, plain, marked, _ in tagged_class(f))


def grid(lo, hi, dim):
    return product(range(lo, hi + 1), repeat=dim)


# -- random interpretations ---------------------------------------------------

def random_expr(rng: random.Random, side: str, n: int, depth: int = 2, affine: bool = False):
    from polygraph3.interpretation import Add, Const, Max, Scale, Var

    if n == 0 or depth == 0 or rng.random() < 0.35:
        if n and rng.random() < 0.75:
            return Var(side, rng.randint(1, n))
        return Const(rng.randint(0, 2))
    kinds = "as" if affine else "ams"
    c = rng.choice(kinds)
    if c == "a":
        return Add(random_expr(rng, side, n, depth - 1, affine),
                   random_expr(rng, side, n, depth - 1, affine))
    if c == "m":
        return Max(random_expr(rng, side, n, depth - 1, affine),
                   random_expr(rng, side, n, depth - 1, affine))
    return Scale(rng.randint(0, 2), random_expr(rng, side, n, depth - 1, affine))


def random_assignment(rng: random.Random, gens, affine: bool = False, currents_min: int = 0):
    from polygraph3.interpretation import (Add, GeneratorInterpretation, HeatExpr,
                                           InterpretationAssignment)

    interps = []
    for g in gens:
        down = tuple(random_expr(rng, "x", g.arity_in, affine=affine) for _ in range(g.arity_out))
        up = tuple(random_expr(rng, "y", g.arity_out, affine=affine) for _ in range(g.arity_in))
        atoms = []
        for _ in range(rng.randint(0, 2)):
            atoms.append(Add(random_expr(rng, "x", g.arity_in, affine=affine),
                             random_expr(rng, "y", g.arity_out, affine=affine)))
        interps.append(GeneratorInterpretation(g, down, up, HeatExpr(tuple(atoms))))
    return InterpretationAssignment(tuple(interps), currents_min)


# -- exhaustive circuit enumeration -------------------------------------------

def all_circuits(gens, max_inputs: int, max_width: int, max_slices: int):
    """Every isotopy class with at most ``max_slices`` generators, at most
    ``max_inputs`` inputs and every intermediate width at most ``max_width``,
    keyed by ``(inputs, least word)``."""
    from polygraph3.circuit import Circuit

    def width(inputs, word):
        w = inputs
        for _, g in word:
            w = w - g.arity_in + g.arity_out
        return w

    level = {(i, ()): i for i in range(max_inputs + 1)}
    seen = dict(level)
    for _ in range(max_slices):
        nxt = {}
        for (inputs, word) in level:
            w = width(inputs, word)
            for g in gens:
                if w - g.arity_in + g.arity_out > max_width:
                    continue
                for p in range(w - g.arity_in + 1):
                    key = (inputs, least_word(word + ((p, g),)))
                    if key not in seen:
                        seen[key] = nxt[key] = inputs
        level = nxt
    return [Circuit(i, width(i, w), to_slices(w)) for (i, w) in seen]
