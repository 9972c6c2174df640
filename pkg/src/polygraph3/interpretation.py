"""Current/heat interpretations of generators and their extension to circuits.

Each generator ``g : m -> n`` carries three monotone maps: ``down`` sends the
m currents flowing in from above to n currents flowing out below, ``up``
sends the n currents arriving from below to m currents leaving through the
top, and ``heat`` produces a multiset from the currents on both sides.  The
expression language only has monotone combinators, so monotonicity needs no
separate check.

Circuits are evaluated slice by slice: a forward pass for ``down``, a
backward pass for ``up``, then every occurrence contributes its heat at the
currents that reach it from each side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .circuit import Circuit, CircuitError, GeneratorDecl, Signature
from .multiset import Multiset, msum_all


class InterpretationError(ValueError):
    pass


# -- current expressions ---------------------------------------------------

@dataclass(frozen=True)
class Var:
    side: str  # "x" (from above) or "y" (from below)
    index: int  # 1-based

    def eval(self, x: Sequence[int], y: Sequence[int]) -> int:
        return (x if self.side == "x" else y)[self.index - 1]

    def __str__(self):
        return f"{self.side}{self.index}"


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise InterpretationError("constants must be naturals")

    def eval(self, x, y) -> int:
        return self.value

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add:
    left: "CurrentExpr"
    right: "CurrentExpr"

    def eval(self, x, y) -> int:
        return self.left.eval(x, y) + self.right.eval(x, y)

    def __str__(self):
        return f"{self.left} + {self.right}"


@dataclass(frozen=True)
class Max:
    left: "CurrentExpr"
    right: "CurrentExpr"

    def eval(self, x, y) -> int:
        return max(self.left.eval(x, y), self.right.eval(x, y))

    def __str__(self):
        return f"max({self.left}, {self.right})"


@dataclass(frozen=True)
class Scale:
    factor: int
    expr: "CurrentExpr"

    def __post_init__(self):
        if self.factor < 0:
            raise InterpretationError("scaling factors must be naturals")

    def eval(self, x, y) -> int:
        return self.factor * self.expr.eval(x, y)

    def __str__(self):
        inner = str(self.expr)
        if isinstance(self.expr, Add):
            inner = f"({inner})"
        return f"{self.factor} * {inner}"


CurrentExpr = Union[Var, Const, Add, Max, Scale]


def variables(e: CurrentExpr) -> set[Var]:
    if isinstance(e, Var):
        return {e}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Scale):
        return variables(e.expr)
    return variables(e.left) | variables(e.right)


def is_affine(e: CurrentExpr) -> bool:
    if isinstance(e, Max):
        return False
    if isinstance(e, (Var, Const)):
        return True
    if isinstance(e, Scale):
        return is_affine(e.expr)
    return is_affine(e.left) and is_affine(e.right)


@dataclass(frozen=True)
class Affine:
    """``const + sum(coeffs[v] * v)`` over variables v."""

    coeffs: tuple[tuple[Var, int], ...]
    const: int

    @staticmethod
    def build(coeffs: Mapping[Var, int], const: int) -> "Affine":
        items = tuple(sorted(((v, c) for v, c in coeffs.items() if c),
                             key=lambda vc: (vc[0].side, vc[0].index)))
        return Affine(items, const)

    def as_dict(self) -> dict[Var, int]:
        return dict(self.coeffs)


def affine_form(e: CurrentExpr) -> Affine:
    """Symbolic normal form of a max-free expression."""
    if isinstance(e, Var):
        return Affine(((e, 1),), 0)
    if isinstance(e, Const):
        return Affine((), e.value)
    if isinstance(e, Scale):
        a = affine_form(e.expr)
        return Affine.build({v: e.factor * c for v, c in a.coeffs}, e.factor * a.const)
    if isinstance(e, Add):
        a, b = affine_form(e.left), affine_form(e.right)
        coeffs = a.as_dict()
        for v, c in b.coeffs:
            coeffs[v] = coeffs.get(v, 0) + c
        return Affine.build(coeffs, a.const + b.const)
    raise InterpretationError(f"expression is not affine: {e}")


# -- heat expressions -------------------------------------------------------

@dataclass(frozen=True)
class HeatExpr:
    """Formal sum of atoms; each atom evaluates to one element of the heat."""

    atoms: tuple[CurrentExpr, ...] = ()

    def eval(self, x, y) -> Multiset:
        return Multiset(a.eval(x, y) for a in self.atoms)

    def __str__(self):
        if not self.atoms:
            return "{}"
        return " + ".join(f"<{a}>" for a in self.atoms)


# -- per-generator interpretation -----------------------------------------

@dataclass(frozen=True)
class GeneratorInterpretation:
    gen: GeneratorDecl
    down: tuple[CurrentExpr, ...]
    up: tuple[CurrentExpr, ...]
    heat: HeatExpr = field(default_factory=HeatExpr)

    def __post_init__(self):
        g = self.gen
        if len(self.down) != g.arity_out:
            raise InterpretationError(
                f"{g.name}: down has {len(self.down)} components, expected {g.arity_out}")
        if len(self.up) != g.arity_in:
            raise InterpretationError(
                f"{g.name}: up has {len(self.up)} components, expected {g.arity_in}")
        limits = {"x": g.arity_in, "y": g.arity_out}
        for part, exprs, sides in (("down", self.down, "x"), ("up", self.up, "y"),
                                   ("heat", self.heat.atoms, "xy")):
            for e in exprs:
                for v in variables(e):
                    if v.side not in sides or not 1 <= v.index <= limits[v.side]:
                        raise InterpretationError(
                            f"{g.name}: variable {v} out of range in {part}")

    def down_values(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(e.eval(x, ()) for e in self.down)

    def up_values(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(e.eval((), y) for e in self.up)

    def heat_value(self, x: Sequence[int], y: Sequence[int]) -> Multiset:
        return self.heat.eval(x, y)

    def is_affine(self) -> bool:
        return all(is_affine(e) for e in self.down + self.up)


@dataclass(frozen=True)
class InterpretationAssignment:
    """Interpretations for a set of generators, plus the least current value."""

    interps: tuple[GeneratorInterpretation, ...] = ()
    currents_min: int = 0

    def __post_init__(self):
        if self.currents_min not in (0, 1):
            raise InterpretationError("currents min must be 0 or 1")
        names = [i.gen.name for i in self.interps]
        if len(set(names)) != len(names):
            raise InterpretationError("generator interpreted twice")

    def __getitem__(self, name: str) -> GeneratorInterpretation:
        for i in self.interps:
            if i.gen.name == name:
                return i
        raise InterpretationError(f"no interpretation for generator {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(i.gen.name == name for i in self.interps)

    def check_total(self, signature: Signature):
        for g in signature:
            if g.name not in self:
                raise InterpretationError(f"no interpretation for generator {g.name!r}")
            if self[g.name].gen != g:
                raise InterpretationError(f"interpretation of {g.name!r} has the wrong arity")

    def is_affine(self) -> bool:
        return all(i.is_affine() for i in self.interps)


# -- evaluation ----------------------------------------------------------------

def _check_len(what: str, got: Sequence, want: int):
    if len(got) != want:
        raise CircuitError(f"{what} has {len(got)} currents, circuit needs {want}")


def _forward(f: Circuit, a: InterpretationAssignment, x: Sequence[int]) -> list[tuple]:
    states = [tuple(x)]
    cur = tuple(x)
    for s in f.slices:
        g = s.gen
        seg = cur[s.pad:s.pad + g.arity_in]
        cur = cur[:s.pad] + a[g.name].down_values(seg) + cur[s.pad + g.arity_in:]
        states.append(cur)
    return states


def _backward(f: Circuit, a: InterpretationAssignment, y: Sequence[int]) -> list[tuple]:
    states = [tuple(y)]
    cur = tuple(y)
    for s in reversed(f.slices):
        g = s.gen
        seg = cur[s.pad:s.pad + g.arity_out]
        cur = cur[:s.pad] + a[g.name].up_values(seg) + cur[s.pad + g.arity_out:]
        states.append(cur)
    states.reverse()
    return states


def eval_down(f: Circuit, a: InterpretationAssignment, x: Sequence[int]) -> tuple[int, ...]:
    _check_len("x", x, f.inputs)
    return _forward(f, a, x)[-1]


def eval_up(f: Circuit, a: InterpretationAssignment, y: Sequence[int]) -> tuple[int, ...]:
    _check_len("y", y, f.outputs)
    return _backward(f, a, y)[0]


def eval_heat(f: Circuit, a: InterpretationAssignment, x: Sequence[int],
              y: Sequence[int]) -> Multiset:
    _check_len("x", x, f.inputs)
    _check_len("y", y, f.outputs)
    down = _forward(f, a, x)
    up = _backward(f, a, y)
    parts = []
    for k, s in enumerate(f.slices):
        g = s.gen
        xs = down[k][s.pad:s.pad + g.arity_in]
        ys = up[k + 1][s.pad:s.pad + g.arity_out]
        parts.append(a[g.name].heat_value(xs, ys))
    return msum_all(parts)


def evaluate(f: Circuit, a: InterpretationAssignment, x: Sequence[int],
             y: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...], Multiset]:
    """``(f_*(x), f^*(y), [f](x, y))`` in one go."""
    return eval_down(f, a, x), eval_up(f, a, y), eval_heat(f, a, x, y)
