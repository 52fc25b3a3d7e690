import random
import warnings
from dataclasses import replace
from fractions import Fraction as F
from itertools import combinations

import networkx as nx
import pytest

from helpers import random_tree
from treembed.search import (
    FOUND, CounterexampleWarning, SearchInconclusive, check_certificate, conjecture_sweep,
    enumerate_topologies, enumerate_trees, search_embed_linf,
)
from treembed.tree import build_tree, star_tree
from treembed.verify import verify_isometry


def dinf(p, q):
    return max(abs(a - b) for a, b in zip(p, q))


def nx_series_reduced_count(leaves):
    """Oracle: unlabelled trees with no degree-2 vertex and exactly *leaves* leaves."""
    if leaves == 2:
        return 1
    total = 0
    for size in range(leaves + 1, 2 * leaves - 1):
        for g in nx.nonisomorphic_trees(size):
            deg = [d for _, d in g.degree()]
            if 2 not in deg and deg.count(1) == leaves:
                total += 1
    return total


class TestStars:
    @pytest.mark.parametrize("k,n,found", [(3, 2, True), (4, 2, True), (5, 2, False),
                                           (3, 1, False), (2, 1, True), (7, 3, True)])
    def test_outcomes(self, unit_star, k, n, found):
        t = unit_star(k).to_tree()
        result = search_embed_linf(t, n)
        assert (result is not None) == found
        if found:
            emb, cert = result
            assert verify_isometry(t, emb).passed
            assert check_certificate(t, cert)

    def test_h_tree_in_plane(self, htree):
        emb, cert = search_embed_linf(htree, 2)
        assert verify_isometry(htree, emb).passed

    def test_budget(self, unit_star):
        with pytest.raises(SearchInconclusive) as info:
            search_embed_linf(unit_star(5).to_tree(), 2, budget=3)
        assert info.value.budget == 3

    def test_deterministic(self, htree):
        a = search_embed_linf(htree, 2)
        b = search_embed_linf(htree, 2)
        assert a[0] == b[0] and a[1].to_dict() == b[1].to_dict()


class TestCertificate:
    def test_round_trip(self, htree):
        emb, cert = search_embed_linf(htree, 2)
        assert check_certificate(htree, cert)

    def test_perturbed_slope(self, htree):
        _, cert = search_embed_linf(htree, 2)
        key = next(k for k, s in cert.slopes.items() if abs(s) == 1)
        slopes = dict(cert.slopes)
        slopes[key] = F(1, 2)
        assert not check_certificate(htree, replace(cert, slopes=slopes))

    def test_missing_witness(self, htree):
        _, cert = search_embed_linf(htree, 2)
        witnesses = dict(cert.witnesses)
        witnesses.pop(next(iter(witnesses)))
        assert not check_certificate(htree, replace(cert, witnesses=witnesses))

    def test_every_vertex_pair_has_full_slope_axis(self):
        rng = random.Random(11)
        for _ in range(15):
            t = random_tree(rng, leaves=rng.randint(2, 4))
            result = search_embed_linf(t, 2)
            assert result is not None
            emb, cert = result
            for a, b in combinations(t.vertices, 2):
                steps = t.path(a, b)
                assert any(
                    all(cert.slope(s.edge, i, s.forward) == sign for s in steps)
                    for i in range(cert.dim) for sign in (1, -1)
                )
                assert dinf(emb[a], emb[b]) == t.distance(a, b)


class TestEnumeration:
    @pytest.mark.parametrize("leaves", range(2, 8))
    def test_topology_counts_match_networkx(self, leaves):
        got = sum(1 for t in enumerate_topologies(leaves) if t.leaves == leaves)
        assert got == nx_series_reduced_count(leaves)

    def test_small_counts(self):
        assert len(enumerate_topologies(3)) == 2
        assert len(enumerate_topologies(4)) == 4

    def test_weighted_instances(self):
        # topologies with 1, 3, 4, 5 edges under a grid of size g
        trees = list(enumerate_trees(4, [1, 2]))
        assert len(trees) == 2 + 2 ** 3 + 2 ** 4 + 2 ** 5
        assert len({repr(t) for t in trees}) == len(trees)

    def test_no_degree_two(self):
        for topo in enumerate_topologies(6):
            t = build_tree((u, v, 1) for u, v in topo.edges)
            assert not t.suppressed
            assert len(t.leaves()) == topo.leaves

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            list(enumerate_trees(3, []))
        with pytest.raises(ValueError):
            list(enumerate_trees(3, [0]))


class TestSweep:
    def test_small_sweep_all_found(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", CounterexampleWarning)
            report = conjecture_sweep(2, 3, [1, F(1, 2)])
        assert report.counts() == {FOUND: len(report.records), "exhausted-none": 0, "inconclusive": 0}
        assert not report.counterexamples

    def test_refuses_beyond_bound(self):
        with pytest.raises(ValueError, match="exceeds"):
            conjecture_sweep(1, 3, [1])

    def test_parallel_matches_serial(self):
        a = conjecture_sweep(2, 4, [1, 2], n_jobs=1)
        b = conjecture_sweep(2, 4, [1, 2], n_jobs=2)
        assert a.to_jsonl() == b.to_jsonl()

    def test_counterexample_flag(self):
        from treembed.search import NONE, SweepRecord
        rec = SweepRecord("x", [], 3, 2, NONE, 10)
        assert rec.counterexample and rec.to_dict()["counterexample_candidate"]
        assert not SweepRecord("x", [], 5, 2, NONE, 10).counterexample
