"""Checking that every rule decreases under a current/heat interpretation.

For a rule ``f => g`` with ``m`` inputs and ``n`` outputs the order asks,
for all currents ``x`` (length m) and ``y`` (length n):

* ``f_*(x) >= g_*(x)`` componentwise,
* ``f^*(y) >= g^*(y)`` componentwise,
* ``[f](x, y) > [g](x, y)`` in the multiset order.

Currents range over the naturals from the assignment's minimum upwards, so
a tool has to pick a decidable regime.  :class:`BoundedGrid` tests a finite
box exhaustively and only ever claims "up to bound".  :class:`AffineExact`
decides the two current inequalities for max-free interpretations by
comparing composed affine forms; heat strictness is still sampled on a box.
"""
from __future__ import annotations

import enum
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence, Union

from .circuit import Circuit
from .interpretation import (Affine, Var, affine_form, eval_down, eval_heat,
                             eval_up, InterpretationAssignment)
from .multiset import Order, mcompare
from .rewrite import Polygraph, ReductionTrace, Rule


class CheckError(ValueError):
    pass


@dataclass(frozen=True)
class BoundedGrid:
    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise CheckError("grid bound must be at least 1")

    def __str__(self):
        return f"grid:{self.bound}"


@dataclass(frozen=True)
class AffineExact:
    heat_bound: int = 4

    def __post_init__(self):
        if self.heat_bound < 1:
            raise CheckError("heat bound must be at least 1")

    def __str__(self):
        return f"affine:{self.heat_bound}"


VerificationMode = Union[BoundedGrid, AffineExact]


def parse_mode(text: str) -> VerificationMode:
    """``grid:B``, ``affine`` or ``affine:B``."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "grid" and arg:
            return BoundedGrid(int(arg))
        if kind == "affine":
            return AffineExact(int(arg)) if arg else AffineExact()
    except ValueError as e:
        raise CheckError(f"bad mode {text!r}: {e}") from None
    raise CheckError(f"bad mode {text!r}; expected grid:B, affine or affine:B")


@dataclass(frozen=True)
class Counterexample:
    x: tuple[int, ...]
    y: tuple[int, ...]
    failed: tuple[str, ...]  # subset of ("down", "up", "heat")

    def point(self) -> tuple[int, ...]:
        return self.x + self.y


@dataclass(frozen=True)
class RuleVerdict:
    rule: str
    down_ok: bool
    up_ok: bool
    heat_strict: bool
    mode: VerificationMode
    counterexample: Optional[Counterexample] = None

    @property
    def passed(self) -> bool:
        return self.down_ok and self.up_ok and self.heat_strict

    def record(self) -> dict:
        ce = self.counterexample
        return {
            "rule": self.rule,
            "down_ok": self.down_ok,
            "up_ok": self.up_ok,
            "heat_strict": self.heat_strict,
            "mode": str(self.mode),
            "counterexample": None if ce is None else {
                "x": list(ce.x), "y": list(ce.y), "failed": list(ce.failed)},
        }


class Overall(enum.Enum):
    CERTIFIED = "Certified"
    CERTIFIED_UP_TO_BOUND = "CertifiedUpToBound"
    REFUTED = "Refuted"


@dataclass(frozen=True)
class VerificationReport:
    verdicts: tuple[RuleVerdict, ...]
    mode: VerificationMode
    currents_min: int
    overall: Overall
    refuted: Optional[RuleVerdict] = None
    caveats: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.overall is not Overall.REFUTED

    def headline(self) -> str:
        if self.overall is Overall.REFUTED:
            ce = self.refuted.counterexample
            return (f"Refuted: rule {self.refuted.rule} fails {'/'.join(ce.failed)} "
                    f"at x={list(ce.x)} y={list(ce.y)}")
        if self.overall is Overall.CERTIFIED_UP_TO_BOUND:
            return f"CertifiedUpToBound{{{self.mode.bound}}}"
        return "Certified"

    def render_text(self) -> str:
        lines = [f"mode {self.mode}, currents min {self.currents_min}"]
        for v in self.verdicts:
            mark = "PASS" if v.passed else "FAIL"
            line = (f"{mark} {v.rule}: down {_yn(v.down_ok)}, up {_yn(v.up_ok)}, "
                    f"heat {'strict' if v.heat_strict else 'not strict'}")
            if v.counterexample is not None:
                ce = v.counterexample
                line += f" (counterexample x={list(ce.x)} y={list(ce.y)}: {'/'.join(ce.failed)})"
            lines.append(line)
        for c in self.caveats:
            lines.append(f"caveat: {c}")
        lines.append(self.headline())
        return "\n".join(lines) + "\n"

    def records(self) -> dict:
        return {
            "mode": str(self.mode),
            "currents_min": self.currents_min,
            "overall": self.overall.value,
            "caveats": list(self.caveats),
            "rules": [v.record() for v in self.verdicts],
        }

    def render_records(self) -> str:
        return json.dumps(self.records(), indent=2, sort_keys=True) + "\n"


def _yn(b: bool) -> str:
    return "ok" if b else "FAILS"


# -- the three inequalities at one point ------------------------------------

def _geq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(u >= v for u, v in zip(a, b))


ALL = ("down", "up", "heat")


def _failures(f: Circuit, g: Circuit, a: InterpretationAssignment, x, y,
              which=ALL) -> tuple[str, ...]:
    out = []
    if "down" in which and not _geq(eval_down(f, a, x), eval_down(g, a, x)):
        out.append("down")
    if "up" in which and not _geq(eval_up(f, a, y), eval_up(g, a, y)):
        out.append("up")
    if "heat" in which and mcompare(eval_heat(f, a, x, y),
                                    eval_heat(g, a, x, y)) is not Order.GREATER:
        out.append("heat")
    return tuple(out)


def _grid_chunk(args) -> tuple[set[str], Optional[tuple]]:
    """Scan the points whose first coordinate is ``first`` (or the whole
    grid when there are no coordinates)."""
    f, g, a, lo, bound, first, which = args
    m, n = f.inputs, f.outputs
    dim = m + n
    rng = range(lo, lo + bound + 1)
    points = product(rng, repeat=dim - 1) if dim else [()]
    failed: set[str] = set()
    least = None
    for rest in points:
        pt = ((first,) + rest) if dim else ()
        x, y = pt[:m], pt[m:]
        bad = _failures(f, g, a, x, y, which)
        if bad:
            failed.update(bad)
            if least is None:
                least = (x, y, bad)
    return failed, least


def _scan_grid(f: Circuit, g: Circuit, a: InterpretationAssignment, bound: int, jobs: int,
               which=ALL) -> tuple[set[str], Optional[Counterexample]]:
    lo = a.currents_min
    dim = f.inputs + f.outputs
    firsts = list(range(lo, lo + bound + 1)) if dim else [None]
    tasks = [(f, g, a, lo, bound, v, which) for v in firsts]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_grid_chunk, tasks))
    else:
        results = [_grid_chunk(t) for t in tasks]
    failed: set[str] = set()
    least = None
    # chunks come back in order of the first coordinate, so the first
    # failing chunk holds the lexicographically least failing point
    for got, pt in results:
        failed |= got
        if least is None and pt is not None:
            least = Counterexample(*pt)
    return failed, least


# -- affine reasoning ---------------------------------------------------------

def _substitute(e, env: Sequence[Affine]) -> Affine:
    """Affine form of ``e`` with its local variables replaced by ``env``."""
    local = affine_form(e)
    coeffs: dict[Var, int] = {}
    const = local.const
    for v, c in local.coeffs:
        sub = env[v.index - 1]
        const += c * sub.const
        for w, d in sub.coeffs:
            coeffs[w] = coeffs.get(w, 0) + c * d
    return Affine.build(coeffs, const)


def affine_down(f: Circuit, a: InterpretationAssignment) -> list[Affine]:
    cur = [Affine(((Var("x", i + 1), 1),), 0) for i in range(f.inputs)]
    for s in f.slices:
        g = s.gen
        seg = cur[s.pad:s.pad + g.arity_in]
        outs = [_substitute(e, seg) for e in a[g.name].down]
        cur[s.pad:s.pad + g.arity_in] = outs
    return cur


def affine_up(f: Circuit, a: InterpretationAssignment) -> list[Affine]:
    cur = [Affine(((Var("y", i + 1), 1),), 0) for i in range(f.outputs)]
    for s in reversed(f.slices):
        g = s.gen
        seg = cur[s.pad:s.pad + g.arity_out]
        outs = [_substitute(e, seg) for e in a[g.name].up]
        cur[s.pad:s.pad + g.arity_out] = outs
    return cur


def _affine_refutation(lhs: list[Affine], rhs: list[Affine], side: str, dim: int,
                       lo: int) -> Optional[tuple[int, ...]]:
    """Least point (among a few candidates) where some ``lhs[i] < rhs[i]``.

    ``lhs[i] - rhs[i] = e0 + sum e_j v_j`` is non-negative on all of
    ``[lo, inf)^dim`` iff every ``e_j >= 0`` and the value at the corner
    ``(lo, ..., lo)`` is non-negative.
    """
    candidates = []
    for p, q in zip(lhs, rhs):
        coeffs = p.as_dict()
        for v, c in q.coeffs:
            coeffs[v] = coeffs.get(v, 0) - c
        e0 = p.const - q.const
        at_lo = e0 + lo * sum(coeffs.values())
        if at_lo < 0:
            candidates.append((lo,) * dim)
            continue
        for v, c in sorted(coeffs.items(), key=lambda vc: vc[0].index):
            if v.side != side or c >= 0:
                continue
            pt = [lo] * dim
            pt[v.index - 1] = lo + (at_lo + 1 + (-c) - 1) // (-c)
            candidates.append(tuple(pt))
    return min(candidates) if candidates else None


# -- public API ---------------------------------------------------------------

def check_pair(f: Circuit, g: Circuit, a: InterpretationAssignment, mode: VerificationMode,
               name: str = "", jobs: int = 1) -> RuleVerdict:
    """Decide ``f > g`` for two parallel circuits in the given regime."""
    if f.interface != g.interface:
        raise CheckError("only parallel circuits are comparable")
    lo = a.currents_min
    m, n = f.inputs, f.outputs
    if isinstance(mode, BoundedGrid):
        failed, ce = _scan_grid(f, g, a, mode.bound, jobs)
        return RuleVerdict(name, "down" not in failed, "up" not in failed,
                           "heat" not in failed, mode, ce)
    names = {gen.name for side in (f, g) for gen in side.generators()}
    for gname in sorted(names):
        if not a[gname].is_affine():
            raise CheckError(f"affine mode needs max-free currents; {gname!r} uses max")
    down_pt = _affine_refutation(affine_down(f, a), affine_down(g, a), "x", m, lo)
    up_pt = _affine_refutation(affine_up(f, a), affine_up(g, a), "y", n, lo)
    heat_failed, heat_ce = _scan_grid(f, g, a, mode.heat_bound, jobs, which=("heat",))
    cands = []
    if down_pt is not None:
        cands.append(Counterexample(down_pt, (lo,) * n, ("down",)))
    if up_pt is not None:
        cands.append(Counterexample((lo,) * m, up_pt, ("up",)))
    if heat_ce is not None:
        cands.append(heat_ce)
    ce = None
    if cands:
        pt = min(c.point() for c in cands)
        x, y = pt[:m], pt[m:]
        ce = Counterexample(x, y, _failures(f, g, a, x, y))
    return RuleVerdict(name, down_pt is None, up_pt is None, not heat_failed, mode, ce)


def check_rule(r: Rule, a: InterpretationAssignment, mode: VerificationMode,
               jobs: int = 1) -> RuleVerdict:
    return check_pair(r.lhs, r.rhs, a, mode, r.name, jobs)


def check_polygraph(pg: Polygraph, a: InterpretationAssignment, mode: VerificationMode,
                    jobs: int = 1) -> VerificationReport:
    a.check_total(pg.signature)
    verdicts = tuple(check_rule(r, a, mode, jobs) for r in pg.rules)
    lo = a.currents_min
    caveats = []
    if pg.rules and isinstance(mode, BoundedGrid):
        caveats.append(f"all inequalities checked only on currents {lo}..{lo + mode.bound}")
    if pg.rules and isinstance(mode, AffineExact):
        caveats.append("current inequalities decided for all currents; heat strictness "
                       f"checked only on currents {lo}..{lo + mode.heat_bound}")
    refuted = next((v for v in verdicts if not v.passed), None)
    if refuted is not None:
        overall = Overall.REFUTED
    elif isinstance(mode, BoundedGrid) and pg.rules:
        overall = Overall.CERTIFIED_UP_TO_BOUND
    else:
        overall = Overall.CERTIFIED
    return VerificationReport(verdicts, mode, lo, overall, refuted, tuple(caveats))


def audit_heat_descent(trace: ReductionTrace, a: InterpretationAssignment,
                       x: Sequence[int], y: Sequence[int]) -> bool:
    """Heat strictly drops at every step of ``trace`` at the given currents."""
    cs = trace.circuits()
    if len(x) != trace.start.inputs or len(y) != trace.start.outputs:
        raise CheckError("currents do not match the trace interface")
    heats = [eval_heat(c, a, x, y) for c in cs]
    return all(mcompare(h0, h1) is Order.GREATER for h0, h1 in zip(heats, heats[1:]))
