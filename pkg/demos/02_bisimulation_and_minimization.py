"""Linear bisimulations: finding redundant state directions and removing them.

Duplicating every state of an automaton (and sharing the final weights)
changes nothing about the function it computes.  The largest linear
bisimulation detects exactly that redundancy: differences between the two
copies of the same state vanish under every observation.
"""

import numpy as np

from wfametrics import (
    Wfa,
    evaluate,
    is_observable,
    is_reachable,
    largest_bisimulation,
    minimize,
    states_bisimilar,
)

rng = np.random.default_rng(42)

# a random 2-state automaton, transitions scaled to norm 0.8
base_trans = {s: rng.standard_normal((2, 2)) for s in ("a", "b")}
top = max(np.linalg.norm(m, 2) for m in base_trans.values())
base_trans = {s: 0.8 * m / top for s, m in base_trans.items()}
base = Wfa(alphabet=("a", "b"), alpha=rng.standard_normal(2),
           beta=rng.standard_normal(2), trans=base_trans)

print("base automaton:   dim", base.dim,
      "observable:", is_observable(base), "reachable:", is_reachable(base))

# duplicate every state
dup = Wfa(
    alphabet=base.alphabet,
    alpha=np.concatenate([base.alpha, base.alpha]),
    beta=np.concatenate([base.beta, base.beta]),
    trans={
        s: np.block([[m, np.zeros((2, 2))], [np.zeros((2, 2)), m]])
        for s, m in base.trans.items()
    },
)
print("duplicated:       dim", dup.dim, "observable:", is_observable(dup))

w = largest_bisimulation(dup)
print("\nlargest bisimulation has dimension", w.dim)
print("basis (columns):")
print(np.round(w.basis, 4))

# copies of the same state are bisimilar
e1 = np.eye(4)[0]
e3 = np.eye(4)[2]
print("\nstate e1 ~ e3 (same state, different copy)?",
      states_bisimilar(dup, e1, e3))
print("state e1 ~ e2 (different states)?        ",
      states_bisimilar(dup, e1, np.eye(4)[1]))

# quotienting recovers the base dimension, with identical behaviour
small = minimize(dup)
print("\nminimized dimension:", small.dim)
for word in ["", "a", "ab", "ba", "abba"]:
    print(f"  f_dup({word or 'ε':>5}) = {evaluate(dup, word):+.6f}"
          f"   f_min = {evaluate(small, word):+.6f}")
