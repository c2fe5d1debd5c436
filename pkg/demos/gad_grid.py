"""Bound gaps for pairs of generalized amplitude damping channels across the temperature grid."""

import numpy as np

from qcdisc.chandiv import gad_bounds_grid

grid = np.linspace(0.0, 1.0, 11)
for eta1, eta2 in ((0.2, 0.3), (0.5, 0.5)):
    cells = gad_bounds_grid(eta1, eta2, grid)
    diff = np.array([c.diff for c in cells]).reshape(len(grid), len(grid))
    finite = diff[np.isfinite(diff)]
    print(f"eta = ({eta1}, {eta2}): gap min {finite.min():.3e}, median {np.median(finite):.3e}, "
          f"max {finite.max():.3e}, infinite cells {np.sum(~np.isfinite(diff))}")
    with np.printoptions(precision=3, suppress=True, linewidth=140):
        print(diff)
    if eta1 == eta2:
        # equal transmissivities share the interaction, so the environment bound applies
        worst = min(c.env_upper - c.lower for c in cells if np.isfinite(c.env_upper))
        print(f"environment bound minus lower, worst cell: {worst:.3e}")
