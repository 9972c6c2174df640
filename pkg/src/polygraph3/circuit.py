"""Circuits over a one-sorted signature, considered modulo isotopy.

A circuit is stored as a list of slices: each slice places one generator
after ``pad`` identity wires, with the remaining wires on the right passing
through.  Two slice words denote the same diagram exactly when one can be
turned into the other by exchanging adjacent slices that act on disjoint
wire intervals (the interchange law).  Every :class:`Circuit` handed out by
this module holds the lexicographically least word of its exchange class,
so structural equality is equality modulo isotopy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class CircuitError(ValueError):
    """Raised for malformed circuits or illegal compositions."""


@dataclass(frozen=True, order=True)
class GeneratorDecl:
    """A 2-cell ``name : arity_in -> arity_out``."""

    name: str
    arity_in: int
    arity_out: int

    def __post_init__(self):
        if self.arity_in < 0 or self.arity_out < 0:
            raise CircuitError(f"negative arity for generator {self.name!r}")

    def __str__(self):
        return f"{self.name} : {self.arity_in} -> {self.arity_out}"


@dataclass(frozen=True)
class Signature:
    generators: tuple[GeneratorDecl, ...] = ()
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for g in self.generators:
            if g.name in index:
                raise CircuitError(f"duplicate generator {g.name!r}")
            index[g.name] = g
        object.__setattr__(self, "_index", index)

    def __getitem__(self, name: str) -> GeneratorDecl:
        try:
            return self._index[name]
        except KeyError:
            raise CircuitError(f"unknown generator {name!r}") from None

    def __contains__(self, item) -> bool:
        if isinstance(item, GeneratorDecl):
            return self._index.get(item.name) == item
        return item in self._index

    def __iter__(self) -> Iterator[GeneratorDecl]:
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def add(self, g: GeneratorDecl) -> "Signature":
        return Signature(self.generators + (g,))


@dataclass(frozen=True)
class Slice:
    pad: int
    gen: GeneratorDecl

    @property
    def key(self) -> tuple:
        return (self.pad, self.gen.name, self.gen.arity_in, self.gen.arity_out)

    def shifted(self, offset: int) -> "Slice":
        return Slice(self.pad + offset, self.gen)


@dataclass(frozen=True)
class Interface:
    inputs: int
    outputs: int


@dataclass(frozen=True)
class Circuit:
    """A circuit ``inputs -> outputs`` in canonical (exchange-normal) form.

    Build circuits with :func:`identity`, :func:`from_generator`,
    :func:`hcomp`, :func:`vcomp` or :func:`canonicalize`; the constructor
    does not normalize.
    """

    inputs: int
    outputs: int
    slices: tuple[Slice, ...] = ()

    @property
    def interface(self) -> Interface:
        return Interface(self.inputs, self.outputs)

    def is_identity(self) -> bool:
        return not self.slices

    def widths(self) -> list[int]:
        """Wire count above each slice, plus the final width."""
        return _widths(self.inputs, self.slices)

    def generators(self) -> list[GeneratorDecl]:
        return [s.gen for s in self.slices]

    def __len__(self):
        return len(self.slices)

    # operator sugar: ``f @ g`` juxtaposes, ``f >> g`` plugs f above g
    def __matmul__(self, other: "Circuit") -> "Circuit":
        return hcomp(self, other)

    def __rshift__(self, other: "Circuit") -> "Circuit":
        return vcomp(self, other)

    def __str__(self):
        from .formats import render_circuit

        return render_circuit(self)


def _widths(inputs: int, slices: Sequence[Slice]) -> list[int]:
    w = inputs
    out = [w]
    for k, s in enumerate(slices):
        if s.pad < 0 or s.pad + s.gen.arity_in > w:
            raise CircuitError(
                f"slice {k} ({s.gen.name} at pad {s.pad}) does not fit in width {w}"
            )
        w = w - s.gen.arity_in + s.gen.arity_out
        out.append(w)
    return out


# -- exchange moves --------------------------------------------------------

def exchange(upper: Slice, lower: Slice) -> list[tuple[Slice, Slice]]:
    """All ways of swapping two adjacent slices.

    ``upper`` is applied first.  Returns pairs ``(new_upper, new_lower)``
    describing the same diagram with the order reversed; empty when the
    slices share a wire.  Two results are possible when a generator with no
    outputs is followed by one with no inputs at the same position: the
    latter may then be drawn on either side of the former.
    """
    p, a = upper.pad, upper.gen
    q, b = lower.pad, lower.gen
    out = []
    if q + b.arity_in <= p:
        out.append((Slice(q, b), Slice(p - b.arity_in + b.arity_out, a)))
    if q >= p + a.arity_out:
        r = (Slice(q - a.arity_out + a.arity_in, b), Slice(p, a))
        if r not in out:
            out.append(r)
    return out


def lift(word: Sequence[Slice], k: int) -> list[tuple[Slice, tuple[Slice, ...]]]:
    """Move ``word[k]`` to the front through exchange moves.

    Returns every ``(front, rest)`` obtainable, ``rest`` being the remaining
    word; empty if the slice is blocked.
    """
    moving = [(word[k], ())]
    for j in range(k - 1, -1, -1):
        nxt = []
        for m, below in moving:
            for m2, a2 in exchange(word[j], m):
                nxt.append((m2, (a2,) + below))
        if not nxt:
            return []
        moving = nxt
    rest = tuple(word[k + 1:])
    results = []
    for m, below in moving:
        r = (m, below + rest)
        if r not in results:
            results.append(r)
    return results


def _least_word(slices: Sequence[Slice]) -> tuple[Slice, ...]:
    # Greedy lexicographic minimum over the exchange class: at each step
    # keep every tail that can follow the least possible front slice.
    frontier = {tuple(slices)}
    out = []
    for _ in range(len(slices)):
        best = None
        tails: set = set()
        for word in frontier:
            for k in range(len(word)):
                for front, rest in lift(word, k):
                    key = front.key
                    if best is None or key < best[0]:
                        best = (key, front)
                        tails = {rest}
                    elif key == best[0]:
                        tails.add(rest)
        out.append(best[1])
        frontier = tails
    return tuple(out)


def canonicalize(inputs: int, slices: Iterable[Slice]) -> Circuit:
    """Return the canonical circuit for a raw slice word.

    The canonical word is the least one in the exchange class under the
    order comparing slices by ``(pad, generator name)``, i.e. the diagram
    read topmost-leftmost.
    """
    slices = tuple(slices)
    widths = _widths(inputs, slices)
    if _mixed(slices):
        # A source may sit on either side of a sink-capped subdiagram; the
        # single-slice lifts cannot reach both placements, the sweep can.
        from ._diagram import Diagram

        return Circuit(inputs, widths[-1], Diagram(inputs, slices).least_word())
    return Circuit(inputs, widths[-1], _least_word(slices))


def _mixed(slices: Sequence[Slice]) -> bool:
    return (any(s.gen.arity_in == 0 for s in slices)
            and any(s.gen.arity_out == 0 for s in slices))


def identity(n: int) -> Circuit:
    if n < 0:
        raise CircuitError("identity of negative width")
    return Circuit(n, n, ())


def from_generator(g: GeneratorDecl | str, signature: Signature | None = None) -> Circuit:
    if signature is not None:
        if isinstance(g, str):
            g = signature[g]
        elif g not in signature:
            raise CircuitError(f"unknown generator {g.name!r}")
    elif isinstance(g, str):
        raise CircuitError(f"cannot resolve generator {g!r} without a signature")
    return Circuit(g.arity_in, g.arity_out, (Slice(0, g),))


def whisker(f: Circuit, left: int, right: int) -> Circuit:
    """``id:left * f * id:right``."""
    if left == 0 and right == 0:
        return f
    return canonicalize(f.inputs + left + right, (s.shifted(left) for s in f.slices))


def hcomp(f: Circuit, g: Circuit) -> Circuit:
    """Horizontal juxtaposition, f on the left of g."""
    word = [s for s in f.slices]
    word += [s.shifted(f.outputs) for s in g.slices]
    return canonicalize(f.inputs + g.inputs, word)


def vcomp(f: Circuit, g: Circuit) -> Circuit:
    """Vertical plugging: the outputs of f feed the inputs of g."""
    if f.outputs != g.inputs:
        raise CircuitError(
            f"cannot plug {f.inputs}->{f.outputs} into {g.inputs}->{g.outputs} "
            f"({f.outputs} outputs vs {g.inputs} inputs)"
        )
    return canonicalize(f.inputs, f.slices + g.slices)


def hcomp_all(circuits: Iterable[Circuit]) -> Circuit:
    out = identity(0)
    for c in circuits:
        out = hcomp(out, c)
    return out


def vcomp_all(circuits: Iterable[Circuit]) -> Circuit:
    circuits = list(circuits)
    if not circuits:
        raise CircuitError("empty vertical composite")
    out = circuits[0]
    for c in circuits[1:]:
        out = vcomp(out, c)
    return out


def equals(f: Circuit, g: Circuit) -> bool:
    return f.interface == g.interface and f.slices == g.slices


def to_dot(f: Circuit, name: str = "circuit") -> str:
    """Graphviz dump: one node per generator occurrence, one edge per wire."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    wires = [f"in{i}" for i in range(f.inputs)]
    for i in range(f.inputs):
        lines.append(f'  in{i} [shape=point, label=""];')
    for k, s in enumerate(f.slices):
        node = f"n{k}"
        lines.append(f'  {node} [shape=box, label="{s.gen.name}"];')
        consumed = wires[s.pad:s.pad + s.gen.arity_in]
        for src in consumed:
            lines.append(f"  {src} -> {node};")
        wires[s.pad:s.pad + s.gen.arity_in] = [node] * s.gen.arity_out
    for i, src in enumerate(wires):
        lines.append(f'  out{i} [shape=point, label=""];')
        lines.append(f"  {src} -> out{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
