import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from polygraph3.circuit import (GeneratorDecl, Signature, canonicalize, equals, from_generator,
                                hcomp, identity, vcomp, whisker)
from polygraph3.formats import parse_term
from polygraph3.rewrite import (Occurrence, Polygraph, RewriteError, Rule, Status, apply_at,
                                find_matches, normalize, rewrite_once)
from oracles import (brute_force_occurrence_classes, occurrence_class, random_signature,
                     random_word, to_slices)

MU = GeneratorDecl("mu", 2, 1)
SIG = Signature((MU,))
M = from_generator(MU)
ASSOC = Rule("assoc", parse_term("(mu * id:1) ; mu", SIG), parse_term("(id:1 * mu) ; mu", SIG))
ASSOC_PG = Polygraph(SIG, (ASSOC,))

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def left_comb(n):
    c = identity(1)
    for _ in range(n):
        c = vcomp(hcomp(c, identity(1)), M)
    return c


def right_comb(n):
    c = identity(1)
    for _ in range(n):
        c = vcomp(hcomp(identity(1), c), M)
    return c


def reduction_graph(start, pg):
    """Every circuit reachable from ``start`` with its successor set."""
    graph, queue = {}, deque([start])
    while queue:
        f = queue.popleft()
        if f in graph:
            continue
        graph[f] = {apply_at(f, o, r) for r in pg.rules for o in find_matches(f, r)}
        queue.extend(graph[f] - graph.keys())
    return graph


def random_pair(rng, max_slices=5):
    gens = random_signature(rng, rng.randint(1, 3), 2)
    inputs = rng.randint(0, 3)
    word, _ = random_word(rng, gens, rng.randint(1, max_slices), inputs, 4)
    f = canonicalize(inputs, to_slices(word))
    if not f.slices:
        return None
    # lhs: a random contiguous block of the word, shifted to pad 0
    i = rng.randrange(len(word))
    block = word[i:rng.randint(i + 1, min(len(word), i + 2))]
    lo = min(p for p, _ in block)
    need, delta = 0, 0
    for p, g in block:
        need = max(need, p - lo + g.arity_in - delta)
        delta += g.arity_out - g.arity_in
    inputs_lhs = need
    lhs = canonicalize(inputs_lhs, [s.shifted(-lo) for s in to_slices(block)])
    return f, lhs


class TestRules:
    def test_parallel_sides(self):
        with pytest.raises(RewriteError, match="not parallel"):
            Rule("bad", M, identity(1))

    def test_identity_lhs(self):
        with pytest.raises(RewriteError, match="identity"):
            Rule("bad", identity(2), identity(2))

    def test_polygraph_checks(self):
        with pytest.raises(RewriteError, match="duplicate"):
            Polygraph(SIG, (ASSOC, ASSOC))
        nu = GeneratorDecl("nu", 2, 1)
        with pytest.raises(RewriteError, match="unknown generator"):
            Polygraph(SIG, (Rule("r", from_generator(nu), M),))
        with pytest.raises(RewriteError, match="unknown rule"):
            ASSOC_PG.rule("comm")


class TestFindMatches:
    def test_self_match(self):
        occs = find_matches(ASSOC.lhs, ASSOC)
        assert Occurrence(identity(3), identity(1), 0, 0) in occs

    def test_identity_has_none(self):
        assert find_matches(identity(5), ASSOC) == []

    def test_two_single_mu(self):
        f = ASSOC.lhs
        occs = find_matches(f, Rule("m", M, M))
        assert len(occs) == 2
        assert len(brute_force_occurrence_classes(f, M)) == 2

    def test_order(self):
        occs = find_matches(ASSOC.lhs, Rule("m", M, M))
        assert [o.sort_key for o in occs] == sorted(o.sort_key for o in occs)
        assert occs[0].context_above == identity(3)

    def test_islands(self):
        # a disconnected lhs matches blocks that are apart in the canonical word
        phi, psi = GeneratorDecl("phi", 1, 1), GeneratorDecl("psi", 1, 1)
        sig = Signature((phi, psi))
        f = parse_term("(phi * id:1) ; (psi * id:1) ; (id:1 * phi)", sig)
        lhs = parse_term("phi * phi", sig)
        occs = find_matches(f, Rule("r", lhs, lhs))
        assert len(occs) == 1
        assert equals(occs[0].plug(lhs), f)

    def test_sources_and_sinks(self):
        u, e = GeneratorDecl("u", 0, 1), GeneratorDecl("e", 1, 0)
        sig = Signature((u, e, MU))
        f = parse_term("(id:1 * u) ; (e * id:1) ; (u * id:1) ; mu", sig)
        lhs = parse_term("u ; e", sig)
        oracle = brute_force_occurrence_classes(f, lhs)
        occs = find_matches(f, Rule("r", lhs, lhs))
        got = {occurrence_class(oracle, o.context_above, lhs, o.left_wires, o.context_below)
               for o in occs}
        assert got == set(oracle) and len(occs) == len(oracle)

    @settings(max_examples=150, deadline=None)
    @given(seeds)
    def test_sound_and_complete(self, seed):
        rng = random.Random(seed)
        pair = random_pair(rng)
        if pair is None:
            return
        f, lhs = pair
        occs = find_matches(f, Rule("r", lhs, lhs))
        for o in occs:
            assert equals(o.plug(lhs), f)
        oracle = brute_force_occurrence_classes(f, lhs)
        got = [occurrence_class(oracle, o.context_above, lhs, o.left_wires, o.context_below)
               for o in occs]
        assert None not in got
        assert sorted(got) == sorted(oracle)


class TestApply:
    def test_self_occurrence(self):
        occ = Occurrence(identity(3), identity(1), 0, 0)
        assert apply_at(ASSOC.lhs, occ, ASSOC) == ASSOC.rhs

    def test_in_context(self):
        f = hcomp(ASSOC.lhs, identity(1))
        occs = [o for o in find_matches(f, ASSOC) if o.right_wires == 1]
        assert len(occs) == 1
        assert equals(apply_at(f, occs[0], ASSOC), hcomp(ASSOC.rhs, identity(1)))

    def test_stale(self):
        occ = Occurrence(identity(3), identity(1), 0, 0)
        with pytest.raises(RewriteError, match="stale"):
            apply_at(ASSOC.rhs, occ, ASSOC)

    @settings(max_examples=100, deadline=None)
    @given(seeds)
    def test_interface_preserved(self, seed):
        rng = random.Random(seed)
        pair = random_pair(rng)
        if pair is None:
            return
        f, lhs = pair
        rhs = whisker(lhs, 0, 0)
        for o in find_matches(f, Rule("r", lhs, rhs)):
            assert apply_at(f, o, Rule("r", lhs, rhs)).interface == f.interface


class TestStrategy:
    def test_normal_form(self):
        assert rewrite_once(ASSOC.rhs, ASSOC_PG) is None
        t = normalize(ASSOC.rhs, ASSOC_PG, 5)
        assert (t.steps, t.status) == ((), Status.NORMALIZED)

    def test_one_step(self):
        rule, occ, out = rewrite_once(ASSOC.lhs, ASSOC_PG)
        assert rule is ASSOC and out == ASSOC.rhs
        t = normalize(ASSOC.lhs, ASSOC_PG, 5)
        assert len(t.steps) == 1 and t.final == ASSOC.rhs

    def test_deterministic(self):
        f = left_comb(4)
        assert rewrite_once(f, ASSOC_PG) == rewrite_once(left_comb(4), ASSOC_PG)

    def test_budget(self):
        t = normalize(left_comb(4), ASSOC_PG, 2)
        assert t.status is Status.BUDGET_EXHAUSTED and len(t.steps) == 2
        with pytest.raises(RewriteError):
            normalize(M, ASSOC_PG, -1)

    def test_budget_exactly_enough(self):
        t = normalize(ASSOC.lhs, ASSOC_PG, 1)
        assert t.status is Status.NORMALIZED

    def test_left_comb_three(self):
        graph = reduction_graph(left_comb(3), ASSOC_PG)
        normal = [f for f, nxt in graph.items() if not nxt]
        assert normal == [right_comb(3)]
        t = normalize(left_comb(3), ASSOC_PG, 10)
        assert t.status is Status.NORMALIZED and t.final == right_comb(3)
        assert len(t.steps) <= 3

    def test_left_comb_four_graph(self):
        graph = reduction_graph(left_comb(4), ASSOC_PG)
        dist = {left_comb(4): 0}
        queue = deque([left_comb(4)])
        while queue:
            f = queue.popleft()
            for g in graph[f]:
                if g not in dist:
                    dist[g] = dist[f] + 1
                    queue.append(g)
        assert dist[right_comb(4)] == 3
        t = normalize(left_comb(4), ASSOC_PG, 10)
        assert t.final == right_comb(4)
        for a, b in zip(t.circuits(), t.circuits()[1:]):
            assert b in graph[a]

    def test_trace_reconstruction(self):
        t = normalize(left_comb(5), ASSOC_PG, 50)
        for before, step in zip(t.circuits(), t.steps):
            assert equals(step.occurrence.plug(ASSOC.lhs), before)
            assert equals(step.occurrence.plug(ASSOC.rhs), step.result)
