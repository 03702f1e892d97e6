"""Largest linear bisimulation, observability/reachability, minimization.

The largest bisimulation of an automaton is the biggest subspace ``W`` with
``W ⊆ ker(beta)`` and ``T[s](W) ⊆ W`` for every symbol.  Two states are
bisimilar exactly when their difference lies in ``W``, and ``W = {0}`` means
every state realizes a distinct function (observability).

Everything here is computed with SVD rank decisions under a single relative
tolerance (see :mod:`wfametrics.linalg`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Wfa
from .linalg import DEFAULT_TOL, fix_signs, null_basis, orth_basis


@dataclass(frozen=True)
class Subspace:
    """Orthonormal basis (columns) of a subspace, plus the rank tolerance used."""

    basis: np.ndarray
    tol: float

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array (columns span the subspace)")
        k = basis.shape[1]
        if k:
            gram = basis.T @ basis
            if not np.allclose(gram, np.eye(k), atol=1e-8):
                raise ValueError("basis columns are not orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.T

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ np.asarray(v, dtype=float))

    def complement_basis(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement."""
        n, k = self.basis.shape
        if k == 0:
            return np.eye(n)
        return null_basis(self.basis.T, self.tol)

    def contains(self, v: np.ndarray, tol: float | None = None) -> bool:
        v = np.asarray(v, dtype=float)
        tol = self.tol if tol is None else tol
        resid = v - self.project(v)
        return float(np.linalg.norm(resid)) <= tol * (1.0 + float(np.linalg.norm(v)))


def largest_bisimulation(a: Wfa, tol: float = DEFAULT_TOL) -> Subspace:
    """Largest subspace inside ``ker(beta)`` invariant under every transition.

    Computed as the decreasing fixed point ``W0 = ker(beta)``,
    ``W_{k+1} = {v in W_k : T[s] v in W_k for all s}``, which stabilizes in
    at most ``dim`` steps.  The zero subspace is always a valid answer.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = a.dim
    if n == 0:
        return Subspace(np.zeros((0, 0)), tol)
    basis = null_basis(a.beta.reshape(1, n), tol)
    mats = [a.trans[s] for s in a.alphabet]
    while basis.shape[1] > 0:
        comp = np.eye(n) - basis @ basis.T
        stacked = np.vstack([comp] + [comp @ m for m in mats])
        new_basis = null_basis(stacked, tol)
        if new_basis.shape[1] == basis.shape[1]:
            basis = new_basis
            break
        basis = new_basis
    return Subspace(basis, tol)


def is_observable(a: Wfa, tol: float = DEFAULT_TOL) -> bool:
    """True when the largest bisimulation is trivial."""
    return largest_bisimulation(a, tol).dim == 0


def is_reachable(a: Wfa, tol: float = DEFAULT_TOL) -> bool:
    """True when the reverse automaton is observable."""
    from .core import reverse

    return is_observable(reverse(a), tol)


def reachable_subspace(a: Wfa, tol: float = DEFAULT_TOL) -> Subspace:
    """Smallest transition-invariant subspace containing ``alpha``.

    Grows the span of ``alpha`` under the transition maps, re-orthonormalizing
    each round, and stops once the rank stabilizes (at most ``dim`` rounds).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = a.dim
    if n == 0:
        return Subspace(np.zeros((0, 0)), tol)
    basis = orth_basis(a.alpha.reshape(n, 1), tol)
    mats = [a.trans[s] for s in a.alphabet]
    while 0 < basis.shape[1] < n:
        cols = [basis] + [m @ basis for m in mats]
        new_basis = orth_basis(np.hstack(cols), tol)
        if new_basis.shape[1] == basis.shape[1]:
            basis = new_basis
            break
        basis = new_basis
    return Subspace(basis, tol)


def _restrict(a: Wfa, basis: np.ndarray) -> Wfa:
    """Compress ``a`` onto the coordinates of an invariant subspace basis."""
    return Wfa(
        alphabet=a.alphabet,
        alpha=basis.T @ a.alpha,
        beta=basis.T @ a.beta,
        trans={s: basis.T @ m @ basis for s, m in a.trans.items()},
    )


def minimize(a: Wfa, tol: float = DEFAULT_TOL) -> Wfa:
    """Equivalent automaton of minimal dimension (observable and reachable).

    Two passes: restrict to the reachable subspace, then quotient by the
    largest bisimulation of the restriction (concretely: compress onto the
    orthogonal complement of the bisimulation subspace, which is sound
    because the complement coordinates determine evaluations once the
    bisimulation part is unobservable).
    """
    reach = reachable_subspace(a, tol)
    restricted = _restrict(a, reach.basis)
    w = largest_bisimulation(restricted, tol)
    quotient_basis = w.complement_basis()
    return _restrict(restricted, quotient_basis)


def states_bisimilar(a: Wfa, u: np.ndarray, v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``u`` and ``v`` realize the same function from ``a``'s states.

    Tests that ``u - v`` lies in the largest bisimulation up to
    ``tol * (1 + |u - v|)``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (a.dim,) or v.shape != (a.dim,):
        raise ValueError(f"state vectors must have shape ({a.dim},)")
    w = largest_bisimulation(a, tol)
    diff = u - v
    resid = diff - w.project(diff)
    return float(np.linalg.norm(resid)) <= tol * (1.0 + float(np.linalg.norm(diff)))
