"""Joint spectral radius: certified growth-rate brackets for matrix families.

The JSR is the worst-case asymptotic growth rate over arbitrary products from
a family.  It is not computable exactly, but product enumeration gives
certified brackets: eigenvalues of explored products push the lower bound up,
level norms pull the upper bound down.
"""

import numpy as np

from wfametrics import hausdorff_distance, is_irreducible, jsr_bounds

# the classic pair whose JSR is the golden ratio
pair = [np.array([[1.0, 1.0], [0.0, 1.0]]),
        np.array([[1.0, 0.0], [1.0, 1.0]])]
golden = (1 + np.sqrt(5)) / 2

print("classic pair, golden ratio =", golden)
for depth in (2, 4, 8, 12):
    b = jsr_bounds(pair, depth=depth)
    print(f"  depth {depth:2d}: [{b.lower:.9f}, {b.upper:.9f}]"
          f"  witness {''.join(b.witness)}")

# a single normal matrix closes immediately
rot = 0.8 * np.array([[0.0, -1.0], [1.0, 0.0]])
b = jsr_bounds([rot], depth=1)
print("\nscaled rotation: bracket", (b.lower, b.upper), "(radius is 0.8)")

# stochastic matrices always bracket 1
mat = np.array([[0.2, 0.8], [0.5, 0.5]])
b = jsr_bounds([mat], depth=4)
print("row-stochastic matrix: bracket", (round(b.lower, 12), round(b.upper, 12)))

# pruning keeps bounds valid, only wider
b_full = jsr_bounds(pair, depth=10)
b_tiny = jsr_bounds(pair, depth=10, node_budget=8)
print("\nwith an 8-product beam:  ",
      f"[{b_tiny.lower:.6f}, {b_tiny.upper:.6f}] truncated={b_tiny.truncated}")
print("with the default budget: ",
      f"[{b_full.lower:.6f}, {b_full.upper:.6f}]")

# irreducibility: no common invariant subspace
print("\nclassic pair irreducible?", is_irreducible(pair))
print("single diagonal matrix?  ", is_irreducible([np.diag([2.0, 1.0])]))

# Hausdorff distance between matrix sets
near = [m + 0.01 * np.eye(2) for m in pair]
print("\nHausdorff distance to a nudged copy:", hausdorff_distance(pair, near))
