"""The layered decision procedure, redundancy search, chains and
diagonal-block stripping."""

import numpy as np
import pytest

from conftest import random_families
from lumpex.criteria import (
    E_FAMILY,
    NOT_E_FAMILY,
    NOT_REDUNDANT,
    REDUNDANT,
    RULE_DEGENERATE,
    RULE_DIMENSIONAL,
    RULE_LAZY_CYCLE,
    RULE_NO_MULTI_ROW,
    RULE_REDUNDANT,
    RULE_SIMPLIFIED,
    UNKNOWN,
    Verdict,
    chain,
    chain_length,
    check_monotone_pair,
    decide,
    is_degenerate,
    is_redundant_block,
    lazy_cycle_criterion,
    no_multi_row_criterion,
    redundant_merging_criterion,
    strip_diagonal_blocks,
)
from lumpex.digraph import Digraph
from lumpex.dimension import DimensionReport
from lumpex.families import bundled_family
from lumpex.lumping import (
    LumpingMap,
    VacuousFamilyError,
    block_profile,
    hudson_expansion,
    is_nonvacuous,
)


def complete_graph(n):
    return Digraph(n, frozenset((y, yp) for y in range(n) for yp in range(n)))


class TestDegenerate:
    def test_identity_and_single_class(self):
        assert is_degenerate(LumpingMap((0, 1, 2), 3))
        assert is_degenerate(LumpingMap((0, 0, 0), 1))
        assert not is_degenerate(LumpingMap((0, 0, 1), 2))

    def test_decide_short_circuits_before_vacuity(self):
        # not strongly connected, and row 1 is empty; the degenerate layer
        # must answer before these can matter
        g = Digraph(2, frozenset({(0, 1)}))
        v = decide(g, LumpingMap((0, 1), 2))
        assert v == Verdict(
            E_FAMILY, RULE_DEGENERATE, {"num_states": 2, "num_classes": 2}
        )
        assert decide(g, LumpingMap((0, 0), 1)).rule == RULE_DEGENERATE


class TestNoMultiRow:
    def test_hudson_expansions_fire(self):
        for base_edges in (
            {(0, 0), (0, 1), (1, 0), (1, 1)},
            {(0, 0), (0, 1), (1, 0)},
        ):
            g, k = hudson_expansion(Digraph(2, frozenset(base_edges)))
            v = decide(g, k)
            assert v.decision == E_FAMILY
            assert v.rule == RULE_NO_MULTI_ROW
            assert block_profile(g, k).multi_row_merging == ()

    def test_does_not_fire_with_multi_row_merging(self, ex1):
        assert no_multi_row_criterion(block_profile(*ex1)) is None

    def test_beats_lazy_cycle_in_the_ladder(self):
        # satisfies both sufficient conditions; the ladder reports the first
        g = Digraph(
            3, frozenset({(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)})
        )
        k = LumpingMap((0, 1, 1), 2)
        assert lazy_cycle_criterion(g, k) is not None
        assert decide(g, k).rule == RULE_NO_MULTI_ROW


class TestLazyCycle:
    def test_bundled_lazy_cycle_family(self, exlc):
        v = decide(*exlc)
        assert v.decision == E_FAMILY
        assert v.rule == RULE_LAZY_CYCLE
        assert v.certificate == {"cycle": [0, 1, 0]}

    def test_three_class_cycle(self):
        g = Digraph(
            5,
            frozenset(
                {(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 0), (4, 0)}
            ),
        )
        k = LumpingMap((0, 1, 1, 2, 2), 3)
        assert block_profile(g, k).multi_row_merging == ((1, 2),)
        v = decide(g, k)
        assert v.rule == RULE_LAZY_CYCLE
        assert v.certificate == {"cycle": [0, 1, 2, 0]}

    def test_within_class_motion_disqualifies(self, ex1):
        assert lazy_cycle_criterion(*ex1) is None

    def test_laziness_is_about_loops_not_their_absence(self, exlc):
        g, k = exlc
        # extra self-loops keep the lazy-cycle shape intact
        lazier = Digraph(g.n, g.edges | {(0, 0), (1, 1)})
        assert is_nonvacuous(lazier, k)
        assert lazy_cycle_criterion(lazier, k) is not None

    def test_extra_lumped_edge_disqualifies(self):
        g = Digraph(
            5,
            frozenset(
                {(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 0), (4, 0)}
            ),
        )
        k = LumpingMap((0, 1, 1, 2, 2), 3)
        assert lazy_cycle_criterion(g, k) is not None
        chord = Digraph(g.n, g.edges | {(0, 3)})
        assert is_nonvacuous(chord, k)
        assert lazy_cycle_criterion(chord, k) is None


class TestRedundantBlocks:
    def test_ex6_block_is_redundant(self, ex6):
        g, k = ex6
        r = is_redundant_block(g, k, (1, 2))
        assert r.status == REDUNDANT
        assert r.kept_classes == (0, 1, 2)

    def test_lazy_cycle_blocks_are_not_redundant(self, exlc):
        g, k = exlc
        assert is_redundant_block(g, k, (0, 1)).status == NOT_REDUNDANT
        assert is_redundant_block(g, k, (1, 0)).status == NOT_REDUNDANT
        assert redundant_merging_criterion(g, k) is None

    def test_budget_exhaustion_is_unknown(self, ex6):
        g, k = ex6
        r = is_redundant_block(g, k, (1, 2), budget=0)
        assert r.status == UNKNOWN
        assert r.kept_classes is None

    def test_missing_block_raises(self, ex1):
        g, k = ex1
        with pytest.raises(ValueError):
            is_redundant_block(g, k, (1, 2))


class TestDecide:
    def test_ex1_falls_through_to_the_rank_criterion(self, ex1):
        v = decide(*ex1)
        assert v.decision == NOT_E_FAMILY
        assert v.rule == RULE_DIMENSIONAL
        assert isinstance(v.certificate, DimensionReport)
        assert v.certificate.ehull_sum_dim == 10
        assert v.certificate.target == 9

    def test_ex2_redundant_block(self, ex2):
        v = decide(*ex2)
        assert v.decision == NOT_E_FAMILY
        assert v.rule == RULE_REDUNDANT
        assert v.certificate == {"block": (1, 1), "kept_classes": (0, 1)}

    def test_ex6_redundant_block(self, ex6):
        v = decide(*ex6)
        assert v.decision == NOT_E_FAMILY
        assert v.rule == RULE_REDUNDANT
        assert v.certificate == {"block": (0, 1), "kept_classes": (0, 1, 2)}

    def test_budget_zero_still_concludes(self, ex6):
        v = decide(*ex6, budget=0)
        assert v.decision == NOT_E_FAMILY
        assert v.rule == RULE_DIMENSIONAL

    def test_budget_zero_reaches_the_counting_shortcut(self):
        v = decide(complete_graph(4), LumpingMap((0, 0, 1, 1), 2), budget=0)
        assert v.decision == NOT_E_FAMILY
        assert v.rule == RULE_SIMPLIFIED
        assert v.certificate == {"lhs": 8, "rhs": 6}

    def test_vacuous_raises(self):
        g = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
        with pytest.raises(VacuousFamilyError):
            decide(g, LumpingMap((0, 0, 1), 2))


def shrink(g, k, rng, steps):
    edges = set(g.edges)
    for _ in range(steps):
        candidates = sorted(edges)
        rng.shuffle(candidates)
        for e in candidates:
            trial = frozenset(edges - {e})
            if is_nonvacuous(Digraph(g.n, trial), k):
                edges = set(trial)
                break
        else:
            break
    return frozenset(edges)


def legal_step(prev, nxt, k):
    added = nxt - prev
    kappa = k.kappa
    blocks = {(kappa[y], kappa[yp]) for y, yp in added}
    if len(blocks) != 1:
        return False
    (block,) = blocks
    prev_blocks = {(kappa[y], kappa[yp]) for y, yp in prev}
    if block in prev_blocks:
        return len(added) == 1
    rows = sorted(y for y, _ in added)
    return rows == k.class_members()[block[0]]


class TestChain:
    def test_equal_endpoints(self, exlc):
        g, k = exlc
        assert chain(g.edges, g.edges, k) == [g.edges]
        assert chain_length(g.edges, g.edges, k) == 0

    def test_single_edge_link(self):
        g1, k = bundled_family("grid-01")
        g2, _ = bundled_family("grid-02")
        steps = chain(g1.edges, g2.edges, k)
        assert steps == [g1.edges, g2.edges]
        assert g2.edges - g1.edges == {(0, 0)}
        assert chain_length(g1.edges, g2.edges, k) == 1

    def test_whole_block_link(self, exlc):
        g, k = exlc
        small = g.edges - {(2, 2), (3, 3)}
        steps = chain(small, g.edges, k)
        assert steps == [small, g.edges]
        assert chain_length(small, g.edges, k) == 1

    def test_random_nested_pairs(self):
        rng = np.random.default_rng(71)
        for g, k in random_families(71, 25):
            small = shrink(g, k, rng, steps=int(rng.integers(1, 6)))
            steps = chain(small, g.edges, k)
            assert steps[0] == small
            assert steps[-1] == g.edges
            assert len(steps) - 1 == chain_length(small, g.edges, k)
            for prev, nxt in zip(steps, steps[1:]):
                assert prev < nxt
                assert legal_step(prev, nxt, k)
                assert is_nonvacuous(Digraph(g.n, nxt), k)
            assert check_monotone_pair(small, g.edges, k)

    def test_not_nested_raises(self, exlc):
        g, k = exlc
        with pytest.raises(ValueError):
            chain(g.edges, g.edges - {(2, 2)}, k)
        with pytest.raises(ValueError):
            check_monotone_pair(g.edges, g.edges - {(2, 2)}, k)

    def test_vacuous_endpoint_raises(self, exlc):
        g, k = exlc
        # dropping (1,2) disconnects state 2
        with pytest.raises(VacuousFamilyError):
            chain(g.edges - {(1, 2)}, g.edges, k)


class TestMonotonePairs:
    def test_equal_families_are_consistent(self, exlc):
        g, k = exlc
        assert check_monotone_pair(g.edges, g.edges, k)

    def test_big_non_e_family_is_always_consistent(self, ex1):
        g, k = ex1
        small = g.edges - {(0, 0)}
        assert is_nonvacuous(Digraph(g.n, small), k)
        assert check_monotone_pair(small, g.edges, k)


class TestStripDiagonalBlocks:
    def test_removes_self_loop_blocks(self, exlc):
        g, k = exlc
        stripped = strip_diagonal_blocks(g, k)
        assert stripped.edges == g.edges - {(2, 2), (3, 3)}
        assert decide(stripped, k).decision == decide(g, k).decision

    def test_mixed_diagonal_block_is_kept(self, ex1):
        g, k = ex1
        # block (b,b) holds (1,2) and (1,3), so only the (a,a) loop goes
        stripped = strip_diagonal_blocks(g, k)
        assert stripped.edges == g.edges - {(0, 0)}
        assert decide(stripped, k).decision == decide(g, k).decision

    def test_nothing_to_strip_returns_the_graph(self):
        g, k = bundled_family("grid-01")
        assert strip_diagonal_blocks(g, k) is g

    def test_single_state_refuses(self):
        g = Digraph(1, frozenset({(0, 0)}))
        with pytest.raises(ValueError):
            strip_diagonal_blocks(g, LumpingMap((0,), 1))

    def test_verdict_stable_on_random_families(self):
        for g, k in random_families(83, 30):
            if is_degenerate(k):
                continue
            stripped = strip_diagonal_blocks(g, k)
            if stripped is g:
                continue
            assert decide(stripped, k).decision == decide(g, k).decision
