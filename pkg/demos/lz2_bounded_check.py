"""
Six generators at desk scale
============================

Load the bundled polygraph over six generators, run the bounded check on its
rules and normalize a handful of random circuits.
"""

import random

from polygraph3 import BoundedGrid, Status, canonicalize, check_polygraph, load_example, normalize
from polygraph3.circuit import Slice

bundle = load_example("lz2")
pf = bundle.file
pg, assignment = pf.polygraph(), pf.assignment()

print("generators:", ", ".join(str(g) for g in pf.signature))
print("where each line comes from:")
for label, tag in sorted(bundle.provenance.items()):
    print(f"  {label:<18} [{tag}]")

report = check_polygraph(pg, assignment, BoundedGrid(3))
print(report.render_text())

# random circuits of at most ten slices
rng = random.Random(0)
gens = list(pf.signature)
for _ in range(5):
    inputs = width = rng.randint(1, 3)
    word = []
    for _ in range(rng.randint(1, 10)):
        fits = [g for g in gens if g.arity_in <= width and width - g.arity_in + g.arity_out <= 5]
        g = rng.choice(fits)
        word.append(Slice(rng.randint(0, width - g.arity_in), g))
        width += g.arity_out - g.arity_in
    f = canonicalize(inputs, word)
    trace = normalize(f, pg, budget=500)
    assert trace.status is Status.NORMALIZED
    print(f"{len(f)} slices -> {len(trace.final)} slices in {len(trace.steps)} steps: {trace.final}")
