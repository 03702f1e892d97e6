"""Unobservable MDPs with non-negative action-independent rewards.

The value of an action string is its expected discounted reward from the
initial distribution.  Such a UMDP maps onto a weighted automaton whose
discounted sums reproduce the truncated values exactly, which turns the
certified seminorm machinery into a bracket for the sup value over all
action sequences (the quantity whose threshold problem is undecidable, hence
intervals rather than point answers).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .core import Wfa, as_word
from .metric import DEFAULT_BUDGET, DEFAULT_EPS, CertifiedInterval, seminorm_interval

_STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class Umdp:
    """Actions, initial distribution, reward vector, row-stochastic kernels, discount."""

    actions: tuple[str, ...]
    alpha: np.ndarray
    beta: np.ndarray
    trans: dict[str, np.ndarray]
    gamma: float
    num_states: int = field(init=False)

    def __post_init__(self):
        actions = tuple(sorted(self.actions))
        if len(actions) == 0 or len(set(actions)) != len(actions):
            raise ValueError("actions must be non-empty and free of duplicates")
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        n = alpha.shape[0]
        if alpha.ndim != 1 or beta.shape != (n,):
            raise ValueError("alpha and beta must be vectors of equal length")
        if np.any(alpha < -_STOCHASTIC_TOL) or abs(alpha.sum() - 1.0) > _STOCHASTIC_TOL:
            raise ValueError("alpha must be a probability distribution (within 1e-12)")
        if np.any(beta < 0):
            raise ValueError("rewards must be non-negative")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if set(self.trans) != set(actions):
            raise ValueError("trans keys must match the action set")
        trans = {}
        for act in actions:
            mat = np.array(self.trans[act], dtype=float)
            if mat.shape != (n, n):
                raise ValueError(f"kernel for {act!r} has shape {mat.shape}, expected ({n}, {n})")
            if np.any(mat < -_STOCHASTIC_TOL) or np.any(mat > 1.0 + _STOCHASTIC_TOL):
                raise ValueError(f"kernel for {act!r} has entries outside [0, 1]")
            rows = mat.sum(axis=1)
            if np.any(np.abs(rows - 1.0) > _STOCHASTIC_TOL):
                raise ValueError(f"kernel for {act!r} has row sums {rows}, expected 1")
            mat = np.clip(mat, 0.0, None)
            mat = mat / mat.sum(axis=1, keepdims=True)
            mat.setflags(write=False)
            trans[act] = mat
        alpha = np.clip(alpha, 0.0, None)
        alpha = alpha / alpha.sum()
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "num_states", n)


def umdp_value_truncated(u: Umdp, x: Iterable[str], horizon: int) -> float:
    """Discounted reward of the first ``horizon`` steps of action string ``x``.

    Computes ``sum_{t=1..horizon} gamma^(t-1) alpha' T_{x<t} beta`` by
    propagating the state distribution.
    """
    word = as_word(x)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if len(word) < horizon:
        raise ValueError(f"action string of length {len(word)} shorter than horizon {horizon}")
    for act in word:
        if act not in u.trans:
            raise ValueError(f"unknown action {act!r}; actions are {list(u.actions)}")
    dist = u.alpha
    total = 0.0
    gpow = 1.0
    for t in range(horizon):
        total += gpow * float(dist @ u.beta)
        dist = dist @ u.trans[word[t]]
        gpow *= u.gamma
    return total


def umdp_to_wfa(u: Umdp) -> Wfa:
    """Weighted automaton computing the per-step reward terms of ``u``.

    Transitions are the transposed kernels so that column-vector propagation
    matches distribution propagation; for every action string and horizon the
    automaton's discounted absolute sums equal the truncated UMDP value.
    """
    return Wfa(
        alphabet=u.actions,
        alpha=u.alpha,
        beta=u.beta,
        trans={act: mat.T for act, mat in u.trans.items()},
    )


def umdp_sup_value_interval(
    u: Umdp, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET
) -> CertifiedInterval:
    """Certified bracket for the sup over action sequences of the value of ``u``."""
    a = umdp_to_wfa(u)
    return seminorm_interval(a, a.alpha, u.gamma, eps, budget)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def umdp_to_dict(u: Umdp) -> dict:
    return {
        "actions": list(u.actions),
        "states": u.num_states,
        "alpha": u.alpha.tolist(),
        "beta": u.beta.tolist(),
        "trans": {a: m.tolist() for a, m in u.trans.items()},
        "gamma": u.gamma,
    }


def umdp_from_dict(doc: Mapping) -> Umdp:
    for key in ("actions", "states", "alpha", "beta", "trans", "gamma"):
        if key not in doc:
            raise ValueError(f"UMDP document missing field {key!r}")
    n = doc["states"]
    alpha = np.asarray(doc["alpha"], dtype=float)
    beta = np.asarray(doc["beta"], dtype=float)
    if not isinstance(n, int) or alpha.shape != (n,) or beta.shape != (n,):
        raise ValueError("fields 'alpha'/'beta' must have length 'states'")
    return Umdp(
        actions=tuple(doc["actions"]),
        alpha=alpha,
        beta=beta,
        trans={a: np.asarray(m, dtype=float) for a, m in doc["trans"].items()},
        gamma=float(doc["gamma"]),
    )


def load_umdp(path: str) -> Umdp:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}")
    try:
        return umdp_from_dict(doc)
    except ValueError as err:
        raise ValueError(f"{path}: {err}")


def save_umdp(u: Umdp, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(umdp_to_dict(u), fh, indent=2)
        fh.write("\n")
