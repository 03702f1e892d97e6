"""Certified intervals for the discounted bisimulation seminorm and distance.

The seminorm of a state vector ``v`` at discount ``gamma`` is

    s(v) = sup over infinite symbol sequences x of
           sum_t gamma^t |beta(tau_{x<=t}(v))|

and the distance between two automata is the seminorm of the difference
automaton's initial vector.  The sup is not computable exactly, so
:func:`seminorm_interval` runs best-first branch-and-bound over the prefix
tree and returns an interval guaranteed to contain the true value.

Tail bounds
-----------
All bounds live in a working norm ``|v|_S = ||S v||_2`` for a well-conditioned
scaling ``S``.  :func:`compute_tail_params` certifies a block growth rate:
``theta = (max over words x of length m of |tau_x|_S)^(1/m)`` with
``gamma * theta < 1``, plus the single-step cap ``K = max(1, max_s |tau_s|_S)``.
Splitting any word of length ``j = q*m + r`` into ``q`` full blocks and ``r``
leftover steps gives the growth chain

    |tau_x u|_S <= c_j |u|_S,   c_j = theta^(q*m) * K^r,

whose discounted sum is the closed form

    G = sum_j gamma^j c_j = (sum_{r<m} (gamma*K)^r) / (1 - (gamma*theta)^m).

Node bound
----------
For a prefix ``y`` of length ``d`` with state ``u = tau_y v`` and partial value
``P(y) = sum_{t<=d} gamma^t |beta(tau_{y<=t} v)|``, the remaining supremum is
``gamma^d * R(u)`` with ``R(u) = sup_z sum_{j>=1} gamma^j |beta(tau_{z<=j} u)|``.
Let ``W`` be the largest bisimulation subspace and ``P_W`` its orthogonal
projector.  For an exact ``W`` every trajectory started inside ``W`` stays in
``ker(beta)``, so ``R(u) = R((I-P_W)u) <= |beta|_S* (G-1) |(I-P_W)u|_S``;
this is the term that lets equivalent automata close to width ~0 at the root.
With ``W = {0}`` it reduces to the plain chain bound.

The subspace is computed numerically, so two residuals enter: ``r_beta``
(how far ``W`` sticks out of ``ker beta``) and ``delta_W`` (how far ``tau_s``
maps unit vectors of ``W`` outside ``W``), both measured in the working norm.
Splitting ``u = (I-P_W)u + P_W u`` and telescoping the escaped mass gives, to
first order in the residuals,

    R(u) <= |beta|_S* (G-1) |(I-P_W)u|_S
            + C_P (r_beta G + gamma delta_W |beta|_S* G^2) |P_W u|_S

with ``C_P = |P_W|_S``.  Second-order residual terms are neglected; with
SVD-clean subspaces the residuals are ~1e-12 relative, far below the interval
resolutions used anywhere in this package.  Set
``use_kernel_projection=False`` to force ``W = {0}`` (no residual terms at
all).

Node ordering is best-first by node upper bound, ties broken by shorter
prefix then lexicographic order, so single-threaded runs are bit-identical.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .bisim import Subspace, largest_bisimulation
from .core import Wfa, difference
from .jsr import wfa_spectral_radius
from .linalg import DEFAULT_TOL, spectral_norm, spectral_norms

DEFAULT_EPS = 1e-6
DEFAULT_BUDGET = 1_000_000
_CERT_MARGIN = 1e-12


class CannotCertifyError(Exception):
    """Raised when no tail certificate with gamma * theta < 1 was found.

    The discount may still be admissible; retry with a larger search depth
    or a smaller gamma.
    """


@dataclass(frozen=True)
class TailBoundParams:
    """Certified growth data for geometric tail bounds.

    ``theta`` is the certified per-step rate over ``block_len``-step blocks in
    the working norm ``|v|_S = ||scaling @ v||_2``; ``step_norm`` is the
    single-step cap ``K`` (at least 1).
    """

    theta: float
    scaling: np.ndarray
    block_len: int
    step_norm: float

    def __post_init__(self):
        object.__setattr__(self, "scaling", np.array(self.scaling, dtype=float))
        if self.block_len < 1:
            raise ValueError("block_len must be at least 1")


@dataclass(frozen=True)
class CertifiedInterval:
    """Bracket ``[lower, upper]`` for a seminorm or distance value."""

    lower: float
    upper: float
    gamma: float
    depth_explored: int
    nodes_expanded: int
    witness_prefix: tuple[str, ...]
    converged: bool = True

    def __post_init__(self):
        if self.lower < -1e-12 or self.lower > self.upper + 1e-12:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def admissible_gamma_bound(a: Wfa, depth: int = 8) -> float:
    """Largest certifiably admissible discount: 1 / (JSR upper bound).

    Any ``gamma`` strictly below the returned value satisfies
    ``gamma < 1/rho(a)``.  Returns ``inf`` when the transitions are nilpotent
    enough to give a zero upper bound.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    upper = wfa_spectral_radius(a, depth).upper
    if upper == 0.0:
        return np.inf
    return 1.0 / upper


def balance_scaling(mats, iters: int = 25, cond_cap: float = 1e8) -> np.ndarray:
    """Diagonal scaling roughly equalizing joint row and column norms.

    Heuristic only: any well-conditioned diagonal gives valid bounds, this one
    just tends to shrink ``max_s |tau_s|_S``.  Deterministic.
    """
    stack = np.stack([np.asarray(m, dtype=float) for m in mats])
    n = stack.shape[1]
    d = np.ones(n)
    for _ in range(iters):
        scaled = d[None, :, None] * stack / d[None, None, :]
        row = np.sqrt(np.sum(scaled**2, axis=(0, 2)))
        col = np.sqrt(np.sum(scaled**2, axis=(0, 1)))
        ok = (row > 0) & (col > 0)
        factor = np.ones(n)
        factor[ok] = (col[ok] / row[ok]) ** 0.25
        d = d * factor
        if d.max() / d.min() > cond_cap:
            d = np.clip(d, d.max() / cond_cap, None)
    d = d / np.exp(np.mean(np.log(d)))
    return np.diag(d)


def _block_theta(mats_scaled: np.ndarray, m: int) -> float:
    """(max norm over all length-m products)^(1/m) for a scaled family."""
    n = mats_scaled.shape[1]
    prods = np.eye(n)[None]
    for _ in range(m):
        prods = np.einsum("gij,pjk->pgik", mats_scaled, prods).reshape(-1, n, n)
    top = float(np.max(spectral_norms(prods)))
    return top ** (1.0 / m) if top > 0 else 0.0


def compute_tail_params(
    a: Wfa, gamma: float, depth: int = 8, *, product_cap: int = 4096
) -> TailBoundParams:
    """Search for a scaling and block length certifying ``gamma * theta < 1``.

    Tries the identity scaling first, then a diagonal balancing scaling, with
    block lengths ``1..depth`` (capped so no more than ``product_cap`` length-m
    products are formed).  Raises :class:`CannotCertifyError` if nothing
    certifies; the discount may still be admissible at higher depth.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    n = a.dim
    if n == 0:
        return TailBoundParams(theta=0.0, scaling=np.eye(0), block_len=1, step_norm=1.0)
    stack = a.trans_stack()
    k = stack.shape[0]

    candidates = [np.eye(n)]
    balanced = balance_scaling(stack)
    if not np.allclose(balanced, np.eye(n)):
        candidates.append(balanced)

    for s_mat in candidates:
        s_inv = np.linalg.inv(s_mat)
        scaled = np.einsum("ij,gjk,kl->gil", s_mat, stack, s_inv)
        step = float(np.max(spectral_norms(scaled)))
        for m in range(1, depth + 1):
            if k**m > product_cap:
                break
            theta = _block_theta(scaled, m)
            if gamma * theta < 1.0 - _CERT_MARGIN:
                return TailBoundParams(
                    theta=theta, scaling=s_mat, block_len=m, step_norm=max(1.0, step)
                )
    raise CannotCertifyError(
        f"could not certify gamma * theta < 1 for gamma={gamma} "
        f"within block length {depth}; try a larger depth or smaller gamma"
    )


def _discounted_chain_sum(gamma: float, params: TailBoundParams) -> float:
    """G = sum_{j>=0} gamma^j c_j for the block growth chain."""
    m, theta, big_k = params.block_len, params.theta, params.step_norm
    gt = gamma * theta
    if gt**m >= 1.0:
        raise CannotCertifyError(f"tail series diverges: (gamma*theta)^m = {gt**m}")
    head = sum((gamma * big_k) ** r for r in range(m))
    return head / (1.0 - gt**m)


class _BoundData:
    """Precomputed constants for the branch-and-bound node bound."""

    def __init__(self, a: Wfa, gamma: float, params: TailBoundParams, kernel: Subspace | None):
        n = a.dim
        s_mat = params.scaling
        s_inv = np.linalg.inv(s_mat) if n else np.eye(0)
        self.beta_dual = float(np.linalg.norm(s_inv.T @ a.beta))
        self.chain_sum = _discounted_chain_sum(gamma, params)  # G
        self.tail_factor = self.chain_sum - 1.0                # G - 1
        if kernel is not None and kernel.dim > 0:
            basis = kernel.basis
            proj = basis @ basis.T
            self.perp_map = s_mat @ (np.eye(n) - proj)
            self.kernel_map = s_mat @ proj
            sb_pinv = np.linalg.pinv(s_mat @ basis)
            r_beta = float(np.linalg.norm(sb_pinv.T @ (basis.T @ a.beta)))
            delta_w = max(
                float(spectral_norm(self.perp_map @ a.trans[sym] @ basis @ sb_pinv))
                for sym in a.alphabet
            )
            c_proj = float(spectral_norm(s_mat @ proj @ s_inv))
            g = self.chain_sum
            self.resid_coeff = c_proj * (r_beta * g + gamma * delta_w * self.beta_dual * g * g)
        else:
            self.perp_map = s_mat.copy()
            self.kernel_map = None
            self.resid_coeff = 0.0

    def remaining(self, state: np.ndarray) -> float:
        """Upper bound on R(u) = sup_z sum_{j>=1} gamma^j |beta(tau_{z<=j} u)|."""
        out = self.beta_dual * self.tail_factor * float(np.linalg.norm(self.perp_map @ state))
        if self.kernel_map is not None:
            out += self.resid_coeff * float(np.linalg.norm(self.kernel_map @ state))
        return out


def seminorm_interval(
    a: Wfa,
    v: np.ndarray,
    gamma: float,
    eps: float = DEFAULT_EPS,
    budget: int = DEFAULT_BUDGET,
    *,
    params: TailBoundParams | None = None,
    tol: float = DEFAULT_TOL,
    use_kernel_projection: bool = True,
    cert_depth: int = 8,
) -> CertifiedInterval:
    """Certified interval for the discounted seminorm of ``v``.

    Best-first branch-and-bound over the prefix tree: the lower bound is the
    best partial sum found (witnessed by ``witness_prefix``), the upper bound
    is the largest node bound on the frontier.  Terminates when the gap is at
    most ``eps`` or after ``budget`` node expansions; a budget exit still
    returns a valid (wide) interval with ``converged=False``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if budget < 0:
        raise ValueError("budget must be non-negative")
    v = np.asarray(v, dtype=float)
    if v.shape != (a.dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({a.dim},)")
    if a.dim == 0:
        return CertifiedInterval(0.0, 0.0, gamma, 0, 0, ())
    if params is None:
        params = compute_tail_params(a, gamma, depth=cert_depth)

    kernel = largest_bisimulation(a, tol) if use_kernel_projection else None
    data = _BoundData(a, gamma, params, kernel)
    stack = a.trans_stack()
    beta = a.beta
    symbols = a.alphabet

    root_p = abs(float(beta @ v))
    lower = root_p
    witness: tuple[str, ...] = ()
    upper = root_p + data.remaining(v)
    depth_explored = 0
    nodes_expanded = 0

    # heap entries: (-node_upper, depth, word, gamma^(depth+1), state, partial)
    heap = [(-upper, 0, (), gamma, v, root_p)]
    while heap and nodes_expanded < budget:
        neg_u, d, word, gpow, state, partial = heapq.heappop(heap)
        upper = min(upper, -neg_u)
        if upper - lower <= eps:
            break
        children = stack @ state
        bvals = np.abs(children @ beta)
        for i, sym in enumerate(symbols):
            child_state = children[i]
            child_p = partial + gpow * float(bvals[i])
            if child_p > lower:
                lower = child_p
                witness = word + (sym,)
            child_upper = child_p + gpow * data.remaining(child_state)
            heapq.heappush(
                heap,
                (-child_upper, d + 1, word + (sym,), gpow * gamma, child_state, child_p),
            )
        nodes_expanded += 1
        depth_explored = max(depth_explored, d + 1)

    if heap:
        upper = min(upper, -heap[0][0])
    upper = max(upper, lower)
    return CertifiedInterval(
        lower=lower,
        upper=upper,
        gamma=gamma,
        depth_explored=depth_explored,
        nodes_expanded=nodes_expanded,
        witness_prefix=witness,
        converged=(upper - lower) <= eps,
    )


def _canonical_key(a: Wfa):
    return (
        a.dim,
        a.alphabet,
        a.alpha.tobytes(),
        a.beta.tobytes(),
        tuple(a.trans[s].tobytes() for s in a.alphabet),
    )


def distance(
    a1: Wfa,
    a2: Wfa,
    gamma: float,
    eps: float = DEFAULT_EPS,
    budget: int = DEFAULT_BUDGET,
    *,
    tol: float = DEFAULT_TOL,
    use_kernel_projection: bool = True,
    cert_depth: int = 8,
) -> CertifiedInterval:
    """Certified interval for the discounted bisimulation distance.

    Builds the difference automaton, certifies the discount on it (raising
    :class:`CannotCertifyError` otherwise), and brackets the seminorm of its
    initial vector.  The pair is put in a canonical order first so that
    ``distance(a, b)`` and ``distance(b, a)`` run the exact same arithmetic
    and return identical intervals.
    """
    if _canonical_key(a2) < _canonical_key(a1):
        a1, a2 = a2, a1
    diff = difference(a1, a2)
    params = compute_tail_params(diff, gamma, depth=cert_depth)
    return seminorm_interval(
        diff,
        diff.alpha,
        gamma,
        eps,
        budget,
        params=params,
        tol=tol,
        use_kernel_projection=use_kernel_projection,
    )


def joint_tail_params(a1: Wfa, a2: Wfa, gamma: float) -> TailBoundParams:
    """Single-step tail certificate valid for both automata at once.

    Needed by :func:`distance_upper_bound`, whose inequality chain requires a
    per-step bound ``|tau_s|_S, |tau'_s|_S <= theta`` in a common working
    norm (block certificates do not apply there).
    """
    if a1.dim != a2.dim:
        raise ValueError(f"dimension mismatch: {a1.dim} vs {a2.dim}")
    if a1.alphabet != a2.alphabet:
        raise ValueError("alphabet mismatch")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    n = a1.dim
    mats = [a1.trans[s] for s in a1.alphabet] + [a2.trans[s] for s in a2.alphabet]
    candidates = [np.eye(n)]
    balanced = balance_scaling(mats)
    if not np.allclose(balanced, np.eye(n)):
        candidates.append(balanced)
    best = None
    for s_mat in candidates:
        s_inv = np.linalg.inv(s_mat)
        theta = max(spectral_norm(s_mat @ m @ s_inv) for m in mats)
        if gamma * theta < 1.0 - _CERT_MARGIN and (best is None or theta < best[0]):
            best = (theta, s_mat)
    if best is None:
        raise CannotCertifyError(
            f"no common single-step certificate with gamma * theta < 1 at gamma={gamma}"
        )
    theta, s_mat = best
    return TailBoundParams(theta=theta, scaling=s_mat, block_len=1, step_norm=max(1.0, theta))


def distance_upper_bound(a1: Wfa, a2: Wfa, gamma: float, params: TailBoundParams) -> float:
    """Closed-form upper bound on the distance from parameter differences.

    Evaluates, in the working norm of ``params`` with ``nu = gamma * theta``,

        (|a1| |b1-b2|_* + |b2|_* |a1-a2|) / (1-nu)
        + gamma |a1| |b2|_* max_s |t1_s - t2_s| / (1-nu)^2

    where ``theta`` is the joint per-step bound of both transition families.
    Requires ``nu < 1``.
    """
    if a1.dim != a2.dim:
        raise ValueError(f"dimension mismatch: {a1.dim} vs {a2.dim}")
    if a1.alphabet != a2.alphabet:
        raise ValueError("alphabet mismatch")
    n = a1.dim
    if n == 0:
        return 0.0
    s_mat = params.scaling
    s_inv = np.linalg.inv(s_mat)
    theta = max(
        max(spectral_norm(s_mat @ a.trans[sym] @ s_inv) for sym in a.alphabet)
        for a in (a1, a2)
    )
    nu = gamma * theta
    if nu >= 1.0:
        raise ValueError(f"nu = gamma * theta = {nu} >= 1; bound does not apply")
    alpha_norm = float(np.linalg.norm(s_mat @ a1.alpha))
    beta_diff = float(np.linalg.norm(s_inv.T @ (a1.beta - a2.beta)))
    beta2_dual = float(np.linalg.norm(s_inv.T @ a2.beta))
    alpha_diff = float(np.linalg.norm(s_mat @ (a1.alpha - a2.alpha)))
    tau_diff = max(
        spectral_norm(s_mat @ (a1.trans[sym] - a2.trans[sym]) @ s_inv) for sym in a1.alphabet
    )
    return (alpha_norm * beta_diff + beta2_dual * alpha_diff) / (1.0 - nu) + (
        gamma * alpha_norm * beta2_dual * tau_diff
    ) / (1.0 - nu) ** 2


def truncated_seminorm(a: Wfa, v: np.ndarray, gamma: float, depth: int) -> float:
    """Depth-limited seminorm: max over length-``depth`` words of the partial sum.

    This is exactly the branch-and-bound lower-bound function at exhaustive
    depth, and equals ``depth + 1`` applications of the seminorm iteration
    operator to the zero seminorm.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (a.dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({a.dim},)")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if a.dim == 0:
        return 0.0
    stack = a.trans_stack()
    beta = a.beta
    states = v[None, :]
    totals = np.array([abs(float(beta @ v))])
    gpow = 1.0
    for _ in range(depth):
        gpow *= gamma
        states = np.einsum("gij,pj->pgi", stack, states).reshape(-1, a.dim)
        totals = np.repeat(totals, stack.shape[0]) + gpow * np.abs(states @ beta)
    return float(np.max(totals))


def parameter_continuity_experiment(
    a: Wfa,
    perturbation_scales,
    gamma: float,
    eps: float = DEFAULT_EPS,
    *,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> list[tuple[float, float, float, float]]:
    """Distance to randomly perturbed copies of ``a`` at several noise scales.

    For each scale, perturbs alpha, beta and every transition by a random
    direction rescaled to that exact norm (vector 2-norm for alpha/beta,
    spectral norm for matrices), then records
    ``(scale, distance lower, distance upper, closed-form bound)``.
    Rows where the discount cannot be certified for the pair carry NaNs.
    """
    rows = []
    for idx, scale in enumerate(perturbation_scales):
        rng = np.random.default_rng([seed, idx])
        n = a.dim
        alpha = a.alpha + _random_vector(rng, n, scale)
        beta = a.beta + _random_vector(rng, n, scale)
        trans = {s: a.trans[s] + _random_matrix(rng, n, scale) for s in a.alphabet}
        perturbed = Wfa(alphabet=a.alphabet, alpha=alpha, beta=beta, trans=trans)
        try:
            interval = distance(a, perturbed, gamma, eps, budget)
            bound = distance_upper_bound(a, perturbed, gamma, joint_tail_params(a, perturbed, gamma))
            rows.append((float(scale), interval.lower, interval.upper, bound))
        except CannotCertifyError:
            rows.append((float(scale), np.nan, np.nan, np.nan))
    return rows


def _random_vector(rng: np.random.Generator, n: int, norm: float) -> np.ndarray:
    if norm == 0.0 or n == 0:
        return np.zeros(n)
    vec = rng.standard_normal(n)
    return vec * (norm / np.linalg.norm(vec))


def _random_matrix(rng: np.random.Generator, n: int, norm: float) -> np.ndarray:
    if norm == 0.0 or n == 0:
        return np.zeros((n, n))
    mat = rng.standard_normal((n, n))
    return mat * (norm / spectral_norm(mat))
