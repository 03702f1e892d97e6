"""Weighted automata basics: evaluation, reversal, differences, JSON.

A weighted automaton assigns a real value to every word: start from the
initial vector, apply one matrix per symbol, finish with the final covector.
This walkthrough builds the one-letter "growth" automata used throughout the
demos (value of a word of length t is tau^t) and exercises the core algebra.
"""

import numpy as np

from wfametrics import (
    Wfa,
    difference,
    evaluate,
    reverse,
    wfa_to_dict,
    with_initial,
)

# --- a one-letter automaton computing tau^len(word) ------------------------

tau = 1.5
growth = Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"a": [[tau]]})

print("growth automaton, tau =", tau)
for k in range(5):
    word = "a" * k
    print(f"  f({word or 'ε':>4}) = {evaluate(growth, word):g}")

# --- a bigger automaton over two symbols ------------------------------------

counter = Wfa(
    alphabet=("a", "b"),
    alpha=[1.0, 0.0],
    beta=[0.0, 1.0],
    trans={
        "a": [[1.0, 0.0], [1.0, 1.0]],   # 'a' accumulates
        "b": [[1.0, 0.0], [0.0, 1.0]],   # 'b' is inert
    },
)
print("\ncounter automaton: value counts the a's")
for word in ["", "a", "ab", "ba", "aab", "aaab"]:
    print(f"  f({word or 'ε':>5}) = {evaluate(counter, word):g}")

# --- reversal ----------------------------------------------------------------

rev = reverse(counter)
print("\nreverse automaton evaluates mirrored words:")
for word, mirrored in [("ab", "ba"), ("aab", "baa")]:
    print(f"  reverse f({word}) = {evaluate(rev, word):g}   f({mirrored}) = {evaluate(counter, mirrored):g}")

# --- differences -------------------------------------------------------------

slower = Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"a": [[1.25]]})
diff = difference(growth, slower)
print("\ndifference automaton computes f1 - f2:")
for k in range(4):
    word = "a" * k
    print(f"  (f1-f2)({word or 'ε':>4}) = {evaluate(diff, word):+.6g}")

# --- replacing the initial state ----------------------------------------------

shifted = with_initial(counter, np.array([0.0, 1.0]))
print("\nstarting from the second state, the count offset changes:")
print("  f'(aa) =", evaluate(shifted, "aa"))

# --- JSON interchange ----------------------------------------------------------

print("\nJSON document for the growth automaton:")
print(wfa_to_dict(growth))
