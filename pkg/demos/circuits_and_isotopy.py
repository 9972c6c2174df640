"""
Circuits modulo isotopy
=======================

Build a few circuits over a small signature and watch the canonical form
absorb the interchange law.
"""

from polygraph3 import GeneratorDecl, Signature, canonicalize, equals, from_generator
from polygraph3 import hcomp, identity, parse_term, render_circuit, vcomp
from polygraph3.circuit import Slice, to_dot

# a binary product and two unary boxes
mu = GeneratorDecl("mu", 2, 1)
phi = GeneratorDecl("phi", 1, 1)
psi = GeneratorDecl("psi", 1, 1)
sig = Signature((mu, phi, psi))

# phi on the left wire then psi on the right, and the other way round
a = vcomp(hcomp(from_generator(phi), identity(1)), hcomp(identity(1), from_generator(psi)))
b = vcomp(hcomp(identity(1), from_generator(psi)), hcomp(from_generator(phi), identity(1)))
print("a =", render_circuit(a))
print("b =", render_circuit(b))
print("same diagram:", equals(a, b))

# raw slice words are normalized on construction
raw = [Slice(1, phi), Slice(0, psi)]
print("canonical form of", [(s.pad, s.gen.name) for s in raw], "->",
      [(s.pad, s.gen.name) for s in canonicalize(2, raw).slices])

# terms can also be written as text; '*' binds tighter than ';'
left = parse_term("(mu * id:1) ; mu", sig)
right = parse_term("(id:1 * mu) ; mu", sig)
print("left comb: ", left, " widths", left.widths())
print("right comb:", right, " widths", right.widths())
print("parallel:", left.interface == right.interface, " equal:", equals(left, right))

# a Graphviz dump for drawing
print(to_dot(left, "left_comb"))
