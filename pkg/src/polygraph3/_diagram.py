"""Port-graph view of a slice word, and sweeps over it.

A slice word fixes which output port feeds which input port, and in which
planar face every generator sits.  Every word of the same exchange class
is a *sweep* of that structure: a sequence of cuts, each obtained from the
previous one by firing one generator.  Here a cut is the set of fired
occurrences together with the left-to-right sequence of live wires.

A generator with inputs can fire when its input wires are adjacent on the
cut, in port order.  A generator without inputs can be dropped into any gap
of the cut that lies in its face, provided its outputs respect the
left/right order that the rest of the diagram imposes on them.  Some of the
reachable cuts are dead ends; searches below skip them.
"""
from __future__ import annotations

from typing import Sequence

from .circuit import Slice

BOTTOM = -1
TOP = -2


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


class Diagram:
    """Wires, faces and sweep transitions of one slice word."""

    def __init__(self, inputs: int, slices: Sequence[Slice]):
        self.inputs = inputs
        self.gens = [s.gen for s in slices]
        self.n = len(slices)
        uf = _UnionFind()
        gaps = [uf.make() for _ in range(inputs + 1)]
        self.left_ext, self.right_ext = gaps[0], gaps[-1]
        boundary = list(range(inputs))
        n_wires = inputs
        producer = [(TOP, i) for i in range(inputs)]
        consumer: list = [None] * inputs
        lface = gaps[:-1]
        rface = gaps[1:]
        lface, rface = list(lface), list(rface)
        self.ins: list[tuple[int, ...]] = []
        self.outs: list[tuple[int, ...]] = []
        topface: list = []
        for k, s in enumerate(slices):
            g, p = s.gen, s.pad
            ia, oa = g.arity_in, g.arity_out
            consumed = boundary[p:p + ia]
            for port, w in enumerate(consumed):
                consumer[w] = (k, port)
            left, right = gaps[p], gaps[p + ia]
            topface.append(left if ia == 0 else None)
            outs = list(range(n_wires, n_wires + oa))
            n_wires += oa
            for port in range(oa):
                producer.append((k, port))
                consumer.append(None)
            if oa == 0:
                uf.union(left, right)
                seg = [left]
            else:
                seg = [left] + [uf.make() for _ in range(oa - 1)] + [right]
                lface.extend(seg[:-1])
                rface.extend(seg[1:])
            gaps[p:p + ia + 1] = seg
            boundary[p:p + ia] = outs
            self.ins.append(tuple(consumed))
            self.outs.append(tuple(outs))
        for idx, w in enumerate(boundary):
            consumer[w] = (BOTTOM, idx)
        self.outputs = len(boundary)
        self.top_wires = tuple(range(inputs))
        self.bottom_wires = tuple(boundary)
        self.producer = producer
        self.consumer = consumer
        self.lface = [uf.find(f) for f in lface]
        self.rface = [uf.find(f) for f in rface]
        self.topface = [None if f is None else uf.find(f) for f in topface]
        self.left_ext = uf.find(self.left_ext)
        self.right_ext = uf.find(self.right_ext)
        self.sources = [k for k in range(self.n) if self.gens[k].arity_in == 0]
        self._down: dict[int, dict] = {}
        self._up: dict[int, dict] = {}
        self._forced: dict[tuple[int, int], int] = {}
        self._completion: dict = {}

    # -- forced left/right order between wires -------------------------------

    def _reach_down(self, w: int) -> dict:
        got = self._down.get(w)
        if got is not None:
            return got
        c, port = self.consumer[w]
        res = {c: (port, port)}
        if c != BOTTOM:
            for o in self.outs[c]:
                _merge(res, self._reach_down(o))
        self._down[w] = res
        return res

    def _reach_up(self, w: int) -> dict:
        got = self._up.get(w)
        if got is not None:
            return got
        k, port = self.producer[w]
        res = {k: (port, port)}
        if k != TOP:
            for i in self.ins[k]:
                _merge(res, self._reach_up(i))
        self._up[w] = res
        return res

    def forced(self, a: int, b: int) -> int:
        """-1 if wire a is always left of wire b, +1 if always right, else 0."""
        key = (a, b)
        got = self._forced.get(key)
        if got is not None:
            return got
        res = 0
        for reach in (self._reach_down, self._reach_up):
            ra, rb = reach(a), reach(b)
            if len(ra) > len(rb):
                common = (v for v in rb if v in ra)
            else:
                common = (v for v in ra if v in rb)
            for v in common:
                (amin, amax), (bmin, bmax) = ra[v], rb[v]
                if amax < bmin:
                    res = -1
                    break
                if amin > bmax:
                    res = 1
                    break
            if res:
                break
        self._forced[key] = res
        self._forced[(b, a)] = -res
        return res

    # -- sweeps --------------------------------------------------------------

    def initial(self):
        return (frozenset(), self.top_wires)

    def gap_face(self, boundary: tuple, j: int) -> int:
        if j > 0:
            return self.rface[boundary[j - 1]]
        if boundary:
            return self.lface[boundary[0]]
        return self.left_ext

    def source_gaps(self, state, k: int) -> list[int]:
        """Gaps of the cut where source k may be dropped."""
        fired, boundary = state
        face = self.topface[k]
        outs = self.outs[k]
        gaps = []
        for j in range(len(boundary) + 1):
            if self.gap_face(boundary, j) != face:
                continue
            ok = True
            for i, w in enumerate(boundary):
                want = 1 if i < j else -1  # outputs sit right of w iff i < j
                for o in outs:
                    f = self.forced(o, w)
                    if f and f != want:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                gaps.append(j)
        return gaps

    def fire_at(self, state, k: int, pad: int):
        """Fire occurrence k at ``pad``; None if that is not a legal move."""
        fired, boundary = state
        if k in fired:
            return None
        ins = self.ins[k]
        if ins:
            if boundary[pad:pad + len(ins)] != ins:
                return None
        elif pad not in self.source_gaps(state, k):
            return None
        return (fired | {k}, boundary[:pad] + self.outs[k] + boundary[pad + len(ins):])

    def moves(self, state) -> list[tuple[tuple, int, int, tuple]]:
        """All legal ``(key, occurrence, pad, next_state)`` from a cut."""
        fired, boundary = state
        pos = {w: i for i, w in enumerate(boundary)}
        out = []
        for k in range(self.n):
            if k in fired:
                continue
            g = self.gens[k]
            ins = self.ins[k]
            if ins:
                p = pos.get(ins[0])
                if p is None or boundary[p:p + len(ins)] != ins:
                    continue
                pads = [p]
            else:
                pads = self.source_gaps(state, k)
            for p in pads:
                nxt = (fired | {k}, boundary[:p] + self.outs[k] + boundary[p + len(ins):])
                out.append(((p, g.name, g.arity_in, g.arity_out), k, p, nxt))
        out.sort(key=lambda m: (m[0], m[1]))
        return out

    def completion(self, state):
        """Least completion of a cut as a tuple of Slices, None if dead."""
        memo = self._completion
        if state in memo:
            return memo[state]
        fired, boundary = state
        if len(fired) == self.n:
            res = () if boundary == self.bottom_wires else None
            memo[state] = res
            return res
        res = None
        moves = self.moves(state)
        i = 0
        while i < len(moves) and res is None:
            key = moves[i][0]
            group = []
            while i < len(moves) and moves[i][0] == key:
                group.append(moves[i])
                i += 1
            for _, k, p, nxt in group:
                tail = self.completion(nxt)
                if tail is None:
                    continue
                cand = (Slice(p, self.gens[k]),) + tail
                if res is None or _word_key(cand) < _word_key(res):
                    res = cand
        memo[state] = res
        return res

    def least_word(self) -> tuple[Slice, ...]:
        word = self.completion(self.initial())
        assert word is not None, "a diagram built from a word always has a sweep"
        return word


def _merge(into: dict, other: dict):
    for v, (lo, hi) in other.items():
        got = into.get(v)
        if got is None:
            into[v] = (lo, hi)
        else:
            into[v] = (min(got[0], lo), max(got[1], hi))


def _word_key(word) -> tuple:
    return tuple(s.key for s in word)
