"""Rules between parallel circuits, matching modulo isotopy, and reduction."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from ._diagram import BOTTOM, TOP, Diagram
from .circuit import (Circuit, CircuitError, GeneratorDecl, Signature, Slice,
                      canonicalize, equals, vcomp, whisker)


class RewriteError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Circuit
    rhs: Circuit

    def __post_init__(self):
        if self.lhs.interface != self.rhs.interface:
            raise RewriteError(
                f"rule {self.name}: sides not parallel "
                f"({self.lhs.inputs}->{self.lhs.outputs} vs {self.rhs.inputs}->{self.rhs.outputs})")
        if self.lhs.is_identity():
            raise RewriteError(f"rule {self.name}: left-hand side is an identity")


@dataclass(frozen=True)
class Polygraph:
    signature: Signature
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        seen = set()
        for r in self.rules:
            if r.name in seen:
                raise RewriteError(f"duplicate rule {r.name!r}")
            seen.add(r.name)
            for side in (r.lhs, r.rhs):
                for g in side.generators():
                    if g not in self.signature:
                        raise RewriteError(f"rule {r.name}: unknown generator {g.name!r}")

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise RewriteError(f"unknown rule {name!r}")


@dataclass(frozen=True)
class Occurrence:
    """``f = h ; (id:p * lhs * id:q) ; k``."""

    context_above: Circuit
    context_below: Circuit
    left_wires: int
    right_wires: int

    @property
    def sort_key(self) -> tuple:
        h, k = self.context_above, self.context_below
        return (len(h), self.left_wires, tuple(s.key for s in h.slices),
                tuple(s.key for s in k.slices))

    def plug(self, middle: Circuit) -> Circuit:
        """Put ``middle`` in the hole of this context."""
        inner = whisker(middle, self.left_wires, self.right_wires)
        return vcomp(self.context_above, vcomp(inner, self.context_below))


class Status(enum.Enum):
    NORMALIZED = "Normalized"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class Step:
    rule: str
    occurrence: Occurrence
    result: Circuit


@dataclass(frozen=True)
class ReductionTrace:
    start: Circuit
    steps: tuple[Step, ...]
    status: Status

    def circuits(self) -> list[Circuit]:
        return [self.start] + [s.result for s in self.steps]

    @property
    def final(self) -> Circuit:
        return self.steps[-1].result if self.steps else self.start


# -- matching -------------------------------------------------------------

def _embeddings(d: Diagram, lhs: Diagram) -> Iterator[tuple[int, ...]]:
    """Injective maps from lhs occurrences to f occurrences that agree on
    generators and on every wire internal to lhs.  A superset of the real
    occurrences; the sweep in :func:`_realize` has the final word."""
    t = lhs.n
    links: list[list[tuple]] = [[] for _ in range(t)]
    for w, (a, pa) in enumerate(lhs.producer):
        if a == TOP:
            continue
        b, pb = lhs.consumer[w]
        if b == BOTTOM:
            continue
        links[max(a, b)].append((a, pa, b, pb))
    by_gen: dict[GeneratorDecl, list[int]] = {}
    for k, g in enumerate(d.gens):
        by_gen.setdefault(g, []).append(k)

    def linked(phi, a, pa, b, pb) -> bool:
        w = d.outs[phi[a]][pa]
        return d.consumer[w] == (phi[b], pb)

    def extend(phi: list[int]):
        i = len(phi)
        if i == t:
            yield tuple(phi)
            return
        cands = None
        for a, pa, b, pb in links[i]:
            if a == i:
                c, port = d.producer[d.ins[phi[b]][pb]]
                if port != pa or c < 0:
                    return
            else:
                c, port = d.consumer[d.outs[phi[a]][pa]]
                if port != pb or c < 0:
                    return
            cands = [c]
            break
        if cands is None:
            cands = by_gen.get(lhs.gens[i], [])
        for c in cands:
            if c in phi or d.gens[c] != lhs.gens[i]:
                continue
            phi.append(c)
            if all(linked(phi, a, pa, b, pb) for a, pa, b, pb in links[i]):
                yield from extend(phi)
            phi.pop()

    yield from extend([])


def _closure(d: Diagram, start: Iterable[int], step) -> set[int]:
    seen: set[int] = set()
    todo = list(start)
    while todo:
        k = todo.pop()
        for j in step(k):
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return seen


def _parents(d: Diagram, k: int) -> list[int]:
    return [d.producer[w][0] for w in d.ins[k] if d.producer[w][0] >= 0]


def _children(d: Diagram, k: int) -> list[int]:
    return [d.consumer[w][0] for w in d.outs[k] if d.consumer[w][0] >= 0]


def _walk(d: Diagram, state, lhs: Circuit, phi: tuple[int, ...]) -> list[tuple[int, tuple]]:
    """Fire the block right after ``state``; ``(p, state_after)`` per success."""
    fired, boundary = state
    first = lhs.slices[0]
    k0 = phi[0]
    if d.ins[k0]:
        try:
            at = boundary.index(d.ins[k0][0])
        except ValueError:
            return []
        offsets = [at - first.pad]
    else:
        offsets = [j - first.pad for j in d.source_gaps(state, k0)]
    out = []
    for p in offsets:
        if p < 0 or p + lhs.inputs > len(boundary):
            continue
        s = state
        for sl, k in zip(lhs.slices, phi):
            s = d.fire_at(s, k, p + sl.pad)
            if s is None:
                break
        if s is not None and d.completion(s) is not None:
            out.append((p, s))
    return out


def _sweeps(d: Diagram, allowed: set[int], target: Optional[int] = None):
    """States reachable by firing only ``allowed`` occurrences, level by
    level, each with one word leading to it.  With ``target`` only the
    states that fired exactly that many occurrences are yielded."""
    start = d.initial()
    level = {start: ()}
    depth = 0
    while level:
        if target is None or depth == target:
            yield from sorted(level.items(), key=lambda kv: tuple(s.key for s in kv[1]))
        if target is not None and depth >= target:
            return
        nxt: dict = {}
        for state, word in level.items():
            for _, k, p, s in d.moves(state):
                if k in allowed and s not in nxt:
                    nxt[s] = word + (Slice(p, d.gens[k]),)
        level = nxt
        depth += 1


def _realize(d: Diagram, f: Circuit, lhs: Circuit, phi: tuple[int, ...]) -> Optional[Occurrence]:
    block = set(phi)
    above = _closure(d, block, lambda k: _parents(d, k)) - block
    below = _closure(d, block, lambda k: _children(d, k)) - block
    if above & below or above & block or below & block:
        return None
    candidates = []
    # cheapest context first: fire exactly the ancestors of the block
    for state, word in _sweeps(d, above, target=len(above)):
        if state[0] != frozenset(above):
            continue
        for p, after in _walk(d, state, lhs, phi):
            candidates.append((word, p, state, after))
    if not candidates:
        allowed = set(range(d.n)) - block - below
        for state, word in _sweeps(d, allowed):
            if candidates and len(word) > len(candidates[0][0]):
                break
            for p, after in _walk(d, state, lhs, phi):
                candidates.append((word, p, state, after))
    best = None
    for word, p, state, after in candidates:
        h = canonicalize(f.inputs, word)
        k = canonicalize(len(after[1]), d.completion(after))
        occ = Occurrence(h, k, p, len(state[1]) - p - lhs.inputs)
        if best is None or occ.sort_key < best.sort_key:
            best = occ
    return best


def _marked(f: Circuit, phi: Iterable[int]) -> tuple:
    marked = set(phi)
    word = []
    for i, s in enumerate(f.slices):
        g = s.gen
        if i in marked:
            g = GeneratorDecl(g.name + "#", g.arity_in, g.arity_out)
        word.append(Slice(s.pad, g))
    return tuple(s.key for s in canonicalize(f.inputs, word).slices)


def _occurrences(f: Circuit, r: Rule, dedupe: bool) -> list[Occurrence]:
    if len(r.lhs) > len(f) or f.inputs < 0:
        return []
    d = Diagram(f.inputs, f.slices)
    lhs_d = Diagram(r.lhs.inputs, r.lhs.slices)
    found: dict = {}
    for phi in _embeddings(d, lhs_d):
        key = frozenset(phi)
        if key in found:
            continue
        occ = _realize(d, f, r.lhs, phi)
        if occ is not None:
            found[key] = (phi, occ)
    occs = sorted(found.values(), key=lambda po: po[1].sort_key)
    if not dedupe:
        return [o for _, o in occs]
    out, seen = [], set()
    for phi, occ in occs:
        mk = _marked(f, phi)
        if mk not in seen:
            seen.add(mk)
            out.append(occ)
    return out


def find_matches(f: Circuit, r: Rule) -> list[Occurrence]:
    """One occurrence of ``r.lhs`` in ``f`` per isotopy class of
    decompositions, topmost first, then leftmost."""
    return _occurrences(f, r, dedupe=True)


def apply_at(f: Circuit, occ: Occurrence, r: Rule) -> Circuit:
    if not equals(occ.plug(r.lhs), f):
        raise RewriteError(f"stale occurrence for rule {r.name}")
    return occ.plug(r.rhs)


def rewrite_once(f: Circuit, pg: Polygraph) -> Optional[tuple[Rule, Occurrence, Circuit]]:
    for r in pg.rules:
        occs = _occurrences(f, r, dedupe=False)
        if occs:
            occ = occs[0]
            return r, occ, apply_at(f, occ, r)
    return None


def normalize(f: Circuit, pg: Polygraph, budget: int) -> ReductionTrace:
    if budget < 0:
        raise RewriteError("budget must be a natural")
    steps = []
    cur = f
    for _ in range(budget):
        got = rewrite_once(cur, pg)
        if got is None:
            return ReductionTrace(f, tuple(steps), Status.NORMALIZED)
        r, occ, cur = got
        steps.append(Step(r.name, occ, cur))
    status = Status.NORMALIZED if rewrite_once(cur, pg) is None else Status.BUDGET_EXHAUSTED
    return ReductionTrace(f, tuple(steps), status)
