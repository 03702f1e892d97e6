"""Weighted finite automata over the reals: representation and basic algebra.

A :class:`Wfa` holds an initial vector ``alpha``, a final covector ``beta``
and one square transition matrix per alphabet symbol.  States are column
vectors; reading a symbol applies its matrix on the left, so the value of a
word ``x = x1 ... xk`` is ``beta . (T[xk] @ ... @ T[x1] @ alpha)``.

Automata are immutable after construction (arrays are frozen), so all
operations here are pure functions and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

Word = tuple[str, ...]


def as_word(x: Iterable[str]) -> Word:
    """Normalize a word to a tuple of symbols.

    Plain strings iterate per character, which is the right thing for
    single-character alphabets; pass a list/tuple for multi-character
    symbols.
    """
    return tuple(x)


def format_word(word: Sequence[str]) -> str:
    """Render a word compactly: concatenated if all symbols are single chars."""
    if len(word) == 0:
        return "ε"
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return " ".join(word)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Wfa:
    """Dense weighted finite automaton ``(alphabet, alpha, beta, trans)``.

    ``alphabet`` is stored in canonical sorted order.  ``dim`` may be zero
    (the empty automaton computes the zero function); every matrix in
    ``trans`` must be ``dim x dim``.
    """

    alphabet: tuple[str, ...]
    alpha: np.ndarray
    beta: np.ndarray
    trans: dict[str, np.ndarray]
    dim: int = field(init=False)

    def __post_init__(self):
        symbols = tuple(self.alphabet)
        if len(symbols) == 0:
            raise ValueError("alphabet must be non-empty")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"alphabet has duplicate symbols: {symbols}")
        symbols = tuple(sorted(symbols))
        alpha = _freeze(self.alpha)
        beta = _freeze(self.beta)
        if alpha.ndim != 1 or beta.ndim != 1:
            raise ValueError("alpha and beta must be vectors")
        n = alpha.shape[0]
        if beta.shape[0] != n:
            raise ValueError(f"alpha has length {n} but beta has length {beta.shape[0]}")
        if set(self.trans) != set(symbols):
            raise ValueError(
                f"trans keys {sorted(self.trans)} do not match alphabet {sorted(symbols)}"
            )
        trans = {}
        for sym in symbols:
            mat = _freeze(self.trans[sym])
            if mat.shape != (n, n):
                raise ValueError(f"transition for {sym!r} has shape {mat.shape}, expected ({n}, {n})")
            trans[sym] = mat
        object.__setattr__(self, "alphabet", symbols)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "dim", n)

    def trans_stack(self) -> np.ndarray:
        """Transition matrices stacked in alphabet order, shape ``(k, n, n)``."""
        return np.stack([self.trans[s] for s in self.alphabet])

    def check_word(self, word: Iterable[str]) -> Word:
        word = as_word(word)
        for sym in word:
            if sym not in self.trans:
                raise ValueError(f"unknown symbol {sym!r}; alphabet is {list(self.alphabet)}")
        return word


def evaluate(a: Wfa, word: Iterable[str]) -> float:
    """Value of ``a`` on ``word``: ``beta . tau_word(alpha)``.

    The empty word gives ``beta . alpha``.
    """
    word = a.check_word(word)
    state = a.alpha
    for sym in word:
        state = a.trans[sym] @ state
    return float(a.beta @ state)


def reverse(a: Wfa) -> Wfa:
    """Reverse automaton: swaps alpha and beta and transposes each matrix.

    Satisfies ``evaluate(reverse(a), x) == evaluate(a, reversed(x))``.
    """
    return Wfa(
        alphabet=a.alphabet,
        alpha=a.beta,
        beta=a.alpha,
        trans={s: m.T for s, m in a.trans.items()},
    )


def with_initial(a: Wfa, v: np.ndarray) -> Wfa:
    """Copy of ``a`` with the initial vector replaced by ``v``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (a.dim,):
        raise ValueError(f"initial vector has shape {v.shape}, expected ({a.dim},)")
    return Wfa(alphabet=a.alphabet, alpha=v, beta=a.beta, trans=dict(a.trans))


def with_final(a: Wfa, w: np.ndarray) -> Wfa:
    """Copy of ``a`` with the final covector replaced by ``w``."""
    w = np.asarray(w, dtype=float)
    if w.shape != (a.dim,):
        raise ValueError(f"final vector has shape {w.shape}, expected ({a.dim},)")
    return Wfa(alphabet=a.alphabet, alpha=a.alpha, beta=w, trans=dict(a.trans))


def difference(a1: Wfa, a2: Wfa) -> Wfa:
    """Direct-sum automaton computing ``f_a1 - f_a2``.

    Block-diagonal transitions, ``alpha = alpha1 ⊕ (-alpha2)``,
    ``beta = beta1 ⊕ beta2``.
    """
    if a1.alphabet != a2.alphabet:
        missing = set(a1.alphabet) ^ set(a2.alphabet)
        raise ValueError(f"alphabet mismatch; symbols not shared: {sorted(missing)}")
    n1, n2 = a1.dim, a2.dim
    alpha = np.concatenate([a1.alpha, -a2.alpha])
    beta = np.concatenate([a1.beta, a2.beta])
    trans = {}
    for sym in a1.alphabet:
        mat = np.zeros((n1 + n2, n1 + n2))
        mat[:n1, :n1] = a1.trans[sym]
        mat[n1:, n1:] = a2.trans[sym]
        trans[sym] = mat
    return Wfa(alphabet=a1.alphabet, alpha=alpha, beta=beta, trans=trans)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def wfa_to_dict(a: Wfa) -> dict:
    return {
        "alphabet": list(a.alphabet),
        "dim": a.dim,
        "alpha": a.alpha.tolist(),
        "beta": a.beta.tolist(),
        "trans": {s: m.tolist() for s, m in a.trans.items()},
    }


def wfa_from_dict(doc: Mapping) -> Wfa:
    for key in ("alphabet", "dim", "alpha", "beta", "trans"):
        if key not in doc:
            raise ValueError(f"WFA document missing field {key!r}")
    alphabet = doc["alphabet"]
    if not isinstance(alphabet, list) or not all(isinstance(s, str) for s in alphabet):
        raise ValueError("field 'alphabet' must be a list of strings")
    n = doc["dim"]
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"field 'dim' must be a non-negative integer, got {n!r}")
    alpha = np.asarray(doc["alpha"], dtype=float)
    beta = np.asarray(doc["beta"], dtype=float)
    if alpha.shape != (n,):
        raise ValueError(f"field 'alpha' has length {alpha.shape}, expected ({n},)")
    if beta.shape != (n,):
        raise ValueError(f"field 'beta' has length {beta.shape}, expected ({n},)")
    if not isinstance(doc["trans"], Mapping):
        raise ValueError("field 'trans' must be an object mapping symbols to matrices")
    trans = {}
    for sym, rows in doc["trans"].items():
        mat = np.asarray(rows, dtype=float)
        if mat.shape != (n, n):
            raise ValueError(f"trans[{sym!r}] has shape {mat.shape}, expected ({n}, {n})")
        trans[sym] = mat
    return Wfa(alphabet=tuple(alphabet), alpha=alpha, beta=beta, trans=trans)


def load_wfa(path: str) -> Wfa:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}")
    try:
        return wfa_from_dict(doc)
    except ValueError as err:
        raise ValueError(f"{path}: {err}")


def save_wfa(a: Wfa, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(wfa_to_dict(a), fh, indent=2)
        fh.write("\n")
