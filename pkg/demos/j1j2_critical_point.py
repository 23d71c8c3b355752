"""J1-J2 square antiferromagnet at its critical point.

Builds the rigidity matrix from the built-in model, looks at its spectrum and
zero modes, and classifies it.  Run with ``python demos/j1j2_critical_point.py``.
"""

import numpy as np

from rigidity import (classify_model, detect_class, gap_map, linearize_channel_major, load_builtin,
                      maxwell_index, singular_spectrum, zero_locus)

r = linearize_channel_major(load_builtin("j1j2_square"))
print(r)
print("r(0, 0) =\n", np.round(r.evaluate([0, 0]).real, 12))
print("sigmas at (pi/2, pi/2):", singular_spectrum(r, [np.pi / 2, np.pi / 2]).sigmas)

print("class:", detect_class(r))
print("Maxwell index:", maxwell_index(r))

# the first channel factorizes as (1 - e^{ikx})(1 - e^{iky}) and the second as
# (1 + e^{ikx})(1 + e^{iky}), so zero modes sit on the lines kx, ky in {0, pi}
locus = zero_locus(r, 16)
on_axes = np.isclose(locus, 0).any(axis=1)
print(f"zero locus on a 16x16 grid: {len(locus)} points, {on_axes.sum()} on the axes k = 0")
print(f"smallest sigma_min off the locus: {np.sort(gap_map(r, 16).min_sigma)[len(locus)]:.3f}")

rep = classify_model(r)
print("whole matrix:", rep.whole.summary(), "|", rep.whole.verdict.note)
for b in rep.blocks:
    print("  block", b.rows, b.cols, b.summary())
