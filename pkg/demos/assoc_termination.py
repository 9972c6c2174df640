"""
Certifying associativity
========================

Orient associativity from left combs to right combs, give the product an
interpretation by currents and heat, and check that every rewriting step
makes the heat drop.
"""

from polygraph3 import (BoundedGrid, AffineExact, check_polygraph, eval_heat, load_example,
                        normalize, render_circuit)
from polygraph3.checker import audit_heat_descent
from polygraph3.formats import parse_term

bundle = load_example("assoc")
pf = bundle.file
pg, assignment = pf.polygraph(), pf.assignment()
print("rules:", [r.name for r in pg.rules], " currents start at", assignment.currents_min)

# check the rule on a finite grid, then exactly for the affine current maps
print(check_polygraph(pg, assignment, BoundedGrid(4)).render_text())
print(check_polygraph(pg, assignment, AffineExact()).render_text())

# a left comb of five products
comb = parse_term("(mu * id:4) ; (mu * id:3) ; (mu * id:2) ; (mu * id:1) ; mu", pf.signature)
trace = normalize(comb, pg, budget=50)
ones_x, ones_y = [1] * comb.inputs, [1] * comb.outputs
for k, c in enumerate(trace.circuits()):
    print(f"{k}: heat {eval_heat(c, assignment, ones_x, ones_y)!s:<16} {render_circuit(c)}")
print("status:", trace.status.value)

# the heat drops at every step, whatever the boundary currents
for x in ([1] * 6, [4, 1, 3, 2, 2, 1], [2, 2, 2, 2, 9, 5]):
    print("currents", x, "strict descent:", audit_heat_descent(trace, assignment, x, [3]))
