"""Spectral learning: recovering an automaton from finite Hankel data.

The Hankel matrix tabulates f(prefix + suffix).  A complete finite block has
the same rank as the whole (infinite) matrix, and a truncated SVD of it
yields an automaton computing the same function.  With noisy data the learned
automaton drifts, and the certified distance quantifies by how much.
"""

import numpy as np

from wfametrics import (
    Wfa,
    basis_is_complete,
    distance,
    evaluate,
    hankel_from_wfa,
    minimize,
    perturbation_experiment,
    spectral_learn,
)

rng = np.random.default_rng(11)

# target: a random 2-state automaton over {a, b}
tr = {s: rng.standard_normal((2, 2)) for s in ("a", "b")}
top = max(np.linalg.norm(m, 2) for m in tr.values())
tr = {s: 0.7 * m / top for s, m in tr.items()}
target = Wfa(alphabet=("a", "b"), alpha=rng.standard_normal(2),
             beta=rng.standard_normal(2), trans=tr)

words = [(), ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
block = hankel_from_wfa(target, words, words)
print("Hankel block shape:", block.h.shape)
print("complete basis?", basis_is_complete(target, block))
print("H =")
print(np.round(block.h, 4))

learned = spectral_learn(block, rank=minimize(target).dim)
print("\nlearned automaton dimension:", learned.dim)
print("evaluations (target vs learned):")
for word in ["", "a", "ab", "bba", "abab"]:
    print(f"  {word or 'ε':>5}: {evaluate(target, word):+.8f}"
          f"  {evaluate(learned, word):+.8f}")

iv = distance(target, learned, gamma=0.3, eps=1e-8)
print("\ncertified distance between them:", (iv.lower, iv.upper))

# parameters themselves are only recovered up to similarity; comparisons
# must go through behaviour, never through raw matrices
print("\ntrue transition for 'a':")
print(np.round(target.trans["a"], 4))
print("learned transition for 'a' (different basis, same behaviour):")
print(np.round(learned.trans["a"], 4))

# noise sweep: the distance scales linearly with the Hankel error
print("\nnoise sweep (scale, hankel_err, lower, upper, upper/scale, status):")
rows = perturbation_experiment(target, words, words,
                               [1e-2, 1e-3, 1e-4], gamma=0.3, seed=2)
for row in rows:
    print("  ", tuple(round(x, 8) if isinstance(x, float) else x for x in row))
