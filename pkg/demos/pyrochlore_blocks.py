"""Pyrochlore Heisenberg antiferromagnet: block decomposition and trivial topology."""

import numpy as np

from rigidity import classify_model, linearize_channel_major, load_builtin, singular_spectrum, zero_locus

r = linearize_channel_major(load_builtin("pyrochlore"))
k = np.array([0.3, -0.4, 1.1])
print("r(k) at k =", k, "\n", np.round(r.evaluate(k), 3))

block = r.restrict_block([0, 1], [0, 1, 2, 3])
print("first block rank at k=0:", singular_spectrum(block, [0, 0, 0]).rank,
      "| generic rank:", singular_spectrum(block, k).rank)
locus = zero_locus(r, 8)
print(f"zero locus on an 8^3 grid: {len(locus)} points; contains k=0:",
      bool(np.all(np.isclose(locus, 0), axis=1).any()))

rep = classify_model(r)
for b in rep.blocks:
    print(b.summary(), "|", b.verdict.rule)
