import itertools

import numpy as np
import pytest

from wfametrics import (
    Wfa,
    hausdorff_distance,
    is_irreducible,
    jsr_bounds,
    minimize,
    wfa_irreducible,
    wfa_spectral_radius,
    with_final,
    with_initial,
)
from conftest import random_stochastic, random_wfa

GOLDEN = (1 + np.sqrt(5)) / 2
CLASSIC_PAIR = [np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[1.0, 0.0], [1.0, 1.0]])]


def brute_force_bracket(mats, depth):
    """Independent exhaustive product enumeration (no pruning, no batching)."""
    lower, upper = 0.0, np.inf
    level = [np.eye(mats[0].shape[0])]
    for t in range(1, depth + 1):
        level = [m @ p for p in level for m in mats]
        radii = [np.max(np.abs(np.linalg.eigvals(p))) for p in level]
        norms = [np.linalg.norm(p, ord=2) for p in level]
        lower = max(lower, max(radii) ** (1.0 / t))
        upper = min(upper, max(norms) ** (1.0 / t))
    return lower, upper


class TestJsrBounds:
    def test_identity_depth_one(self):
        b = jsr_bounds([np.eye(3)], depth=1)
        assert b.lower <= 1.0 <= b.upper
        assert b.upper - b.lower <= 1e-9

    def test_single_stochastic_contains_one(self, rng):
        b = jsr_bounds([random_stochastic(rng, 4)], depth=6)
        assert b.lower <= 1.0 + 1e-12
        assert b.upper >= 1.0 - 1e-12
        # row sums give the exact upper bound for stochastic matrices
        assert b.upper == pytest.approx(1.0, abs=1e-9)

    def test_classic_pair_brackets_golden_ratio(self):
        b = jsr_bounds(CLASSIC_PAIR, depth=12)
        lo, hi = brute_force_bracket(CLASSIC_PAIR, 12)
        assert b.lower - 1e-12 <= GOLDEN <= b.upper + 1e-12
        assert b.upper - b.lower <= 0.1
        assert b.lower == pytest.approx(lo, abs=1e-9)
        assert b.upper <= hi + 1e-9  # extra norms may tighten, never loosen

    def test_monotone_in_depth(self):
        prev = jsr_bounds(CLASSIC_PAIR, depth=2)
        for depth in (4, 6, 8):
            cur = jsr_bounds(CLASSIC_PAIR, depth=depth)
            assert cur.lower >= prev.lower - 1e-12
            assert cur.upper <= prev.upper + 1e-12
            prev = cur

    def test_witness_attains_lower(self):
        b = jsr_bounds(CLASSIC_PAIR, depth=6)
        prod = np.eye(2)
        for sym in b.witness:
            prod = CLASSIC_PAIR[int(sym)] @ prod
        radius = np.max(np.abs(np.linalg.eigvals(prod)))
        assert radius ** (1.0 / len(b.witness)) == pytest.approx(b.lower, rel=1e-12)

    def test_conjugation_keeps_bracket_overlapping(self, rng):
        t = np.eye(2) + 0.2 * rng.standard_normal((2, 2))
        t_inv = np.linalg.inv(t)
        conj = [t @ m @ t_inv for m in CLASSIC_PAIR]
        b1 = jsr_bounds(CLASSIC_PAIR, depth=8)
        b2 = jsr_bounds(conj, depth=8)
        assert max(b1.lower, b2.lower) <= min(b1.upper, b2.upper) + 1e-9

    def test_budget_prunes_but_stays_valid(self):
        full = jsr_bounds(CLASSIC_PAIR, depth=10)
        pruned = jsr_bounds(CLASSIC_PAIR, depth=10, node_budget=8)
        assert pruned.truncated
        assert pruned.lower <= full.lower + 1e-12
        assert pruned.lower <= GOLDEN <= pruned.upper

    def test_all_zero(self):
        b = jsr_bounds([np.zeros((2, 2)), np.zeros((2, 2))], depth=3)
        assert b.lower == 0.0
        assert b.upper == 0.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            jsr_bounds([np.eye(2), np.eye(3)], depth=2)
        with pytest.raises(ValueError):
            jsr_bounds([np.eye(2)], depth=0)


class TestWfaSpectralRadius:
    def test_growth_automaton(self):
        a = Wfa(alphabet=("a",), alpha=[1.0], beta=[1.0], trans={"a": [[1.5]]})
        b = wfa_spectral_radius(a, depth=4)
        assert b.lower <= 1.5 <= b.upper
        assert b.upper - b.lower <= 1e-9

    def test_direct_sum_law(self, rng):
        from wfametrics import difference

        a1 = random_wfa(rng, n=2, norm_cap=0.8)
        a2 = random_wfa(rng, n=3, norm_cap=1.4)
        d = difference(a1, a2)
        b1 = wfa_spectral_radius(a1, depth=8)
        b2 = wfa_spectral_radius(a2, depth=8)
        bd = wfa_spectral_radius(d, depth=8)
        assert bd.upper >= max(b1.lower, b2.lower) - 1e-12
        assert bd.lower <= max(b1.upper, b2.upper) + 1e-12

    def test_zero_transitions(self):
        a = Wfa(alphabet=("a",), alpha=[1.0, 0.0], beta=[1.0, 1.0],
                trans={"a": np.zeros((2, 2))})
        b = wfa_spectral_radius(a, depth=3)
        assert b.lower == 0.0 and b.upper == 0.0


class TestIrreducible:
    def test_identity_alone_reducible(self):
        assert not is_irreducible([np.eye(2)])
        assert not is_irreducible([np.eye(3)])

    def test_single_diagonalizable_reducible(self):
        assert not is_irreducible([np.diag([2.0, 1.0])])

    def test_generic_pair_irreducible(self, rng):
        for _ in range(5):
            pair = [rng.standard_normal((2, 2)), rng.standard_normal((2, 2))]
            got = is_irreducible(pair)
            assert got == _no_common_eigendirection(pair)

    def test_wfa_minimality_characterization(self, rng):
        # for an irreducible automaton, every nonzero initial/final replacement
        # stays minimal at full dimension
        a = random_wfa(rng, n=2)
        assert wfa_irreducible(a)
        for _ in range(20):
            v = rng.standard_normal(2)
            w = rng.standard_normal(2)
            m = minimize(with_final(with_initial(a, v), w))
            assert m.dim == 2


def _no_common_eigendirection(pair):
    """Eigenvector enumeration oracle for 2x2 families.

    A 2x2 family is reducible iff the generators share a common (real)
    eigendirection, i.e. some eigenvector of the first is also an
    eigenvector of the second.
    """
    directions = []
    for m in pair:
        vals, vecs = np.linalg.eig(m)
        for j in range(2):
            if abs(vals[j].imag) < 1e-12:
                directions.append(np.real(vecs[:, j]))
    for d in directions:
        d = d / np.linalg.norm(d)
        shared = True
        for m in pair:
            image = m @ d
            resid = image - (d @ image) * d
            if np.linalg.norm(resid) > 1e-9 * max(1.0, np.linalg.norm(image)):
                shared = False
                break
        if shared:
            return False
    return True


class TestHausdorff:
    def test_identical_sets(self, rng):
        mats = [rng.standard_normal((3, 3)) for _ in range(3)]
        assert hausdorff_distance(mats, mats) == 0.0

    def test_singletons(self, rng):
        a = rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3))
        expected = np.linalg.norm(a - b, ord=2)
        assert hausdorff_distance([a], [b]) == pytest.approx(expected, rel=1e-12)

    def test_subset_directed_part(self, rng):
        a = rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2))
        expected = np.linalg.norm(a - b, ord=2)
        assert hausdorff_distance([a, b], [a]) == pytest.approx(expected, rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            hausdorff_distance([np.eye(2)], [np.eye(3)])
