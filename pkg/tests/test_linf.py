import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_force_isometric, random_geodesic, random_tree
from treembed.l1 import DimensionError
from treembed.linf import (
    DirectionConflict, GeodesicPolyline, NotGeodesicError, in_sector, is_geodesic_polyline,
    kuratowski_embed_linf, leaf_direction_star, min_dim_linf_bounds, positively_proportional,
    shorten_geodesic, sign_vectors, star_embed_linf,
)
from treembed.embedding import PwaEmbedding, eval_embedding
from treembed.tree import build_tree, star_tree
from treembed.verify import SectorIndex, verify_isometry

seeds = st.integers(0, 2 ** 32 - 1)


def dinf(p, q):
    return max(abs(a - b) for a, b in zip(p, q))


def geodesic_by_length(poly):
    """Oracle: an arclength path is a geodesic iff its length equals the endpoint distance."""
    return poly.length == dinf(poly.breakpoints[0], poly.breakpoints[-1])


class TestStar:
    def test_four_star(self, unit_star):
        emb = star_embed_linf(unit_star(4), 2)
        assert [emb[x] for x in "1234"] == [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        assert dinf(emb["1"], emb["2"]) == 2

    def test_two_star(self):
        emb = star_embed_linf(star_tree(F(3, 2), 5), 1)
        assert emb["1"] == (F(3, 2),) and emb["2"] == (-5,)
        assert verify_isometry(star_tree(F(3, 2), 5).to_tree(), emb).passed

    def test_two_arms_are_antipodal(self):
        star = star_tree(1, 3)
        emb = star_embed_linf(star, 2)
        assert emb["1"] == (1, 1) and emb["2"] == (-3, -3)
        assert verify_isometry(star.to_tree(), emb).passed

    def test_too_many_arms(self, unit_star):
        with pytest.raises(DimensionError, match="at most 4"):
            star_embed_linf(unit_star(5), 2)

    def test_sign_vector_order(self):
        assert sign_vectors(2) == [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_distance_identities(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 3)
        k = rng.randint(1, 2 ** n)
        arms = [F(rng.randint(1, 20), rng.randint(1, 6)) for _ in range(k)]
        star = star_tree(*arms)
        t = star.to_tree()
        emb = star_embed_linf(star, n)
        i, j = rng.randrange(k), rng.randrange(k)
        ti, sj = arms[i] * F(rng.randint(0, 8), 8), arms[j] * F(rng.randint(0, 8), 8)
        fi = eval_embedding(t, emb, star.arm_point(t, i, ti))
        fj = eval_embedding(t, emb, star.arm_point(t, j, sj))
        assert dinf(fi, (0,) * n) == ti
        if i == j:
            assert dinf(fi, fj) == abs(ti - sj)
        else:
            assert dinf(fi, fj) == ti + sj


class TestKuratowski:
    def test_single_edge(self):
        emb = kuratowski_embed_linf(build_tree([("u", "v", 2)]))
        assert emb.images == {"u": (0, 2), "v": (2, 0)}

    def test_three_star(self, unit_star):
        t = unit_star(3).to_tree()
        emb = kuratowski_embed_linf(t)
        assert emb.dim == 3
        assert emb["o"] == (1, 1, 1)
        assert [emb[x] for x in "123"] == [(0, 2, 2), (2, 0, 2), (2, 2, 0)]
        assert verify_isometry(t, emb).passed

    def test_lipschitz_and_exact(self):
        rng = random.Random(6)
        for _ in range(20):
            t = random_tree(rng)
            emb = kuratowski_embed_linf(t)
            for e in t.edges:
                assert all(abs(a - b) <= e.weight for a, b in zip(emb[e.u], emb[e.v]))
            for a, b in combinations(t.vertices, 2):
                assert dinf(emb[a], emb[b]) == t.distance(a, b)
            assert brute_force_isometric(t, emb)


class TestSectors:
    def test_examples(self):
        p, q = (0, 0), (3, 1)
        assert in_sector(p, q, SectorIndex(0, 1))
        assert not in_sector(p, q, SectorIndex(1, 1))
        assert all(in_sector(p, p, SectorIndex(i, s)) for i in range(2) for s in (1, -1))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            in_sector((0, 0), (1, 2, 3), SectorIndex(0, 1))

    @settings(max_examples=100, deadline=None)
    @given(seeds)
    def test_nesting(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 4)
        s = SectorIndex(rng.randrange(n), rng.choice((1, -1)))

        def point_in_sector(p):
            r = F(rng.randint(0, 10), rng.randint(1, 3))
            v = [F(rng.randint(-10, 10), 10) * r for _ in range(n)]
            v[s.axis] = s.sign * r
            return tuple(a + b for a, b in zip(p, v))

        p = tuple(F(rng.randint(-5, 5)) for _ in range(n))
        q = point_in_sector(p)
        r = point_in_sector(q)
        assert in_sector(p, q, s) and in_sector(q, r, s)
        assert in_sector(p, r, s)


class TestGeodesic:
    def test_bent_geodesic(self):
        poly = GeodesicPolyline(((0, 0), (1, 1), (2, F(1, 2))))
        assert is_geodesic_polyline(poly) == SectorIndex(0, 1)
        assert geodesic_by_length(poly)

    def test_second_axis_witness(self):
        # coordinate 1 reverses, but coordinate 2 rises at full slope on both segments
        poly = GeodesicPolyline(((0, 0), (1, 1), (0, 2)))
        assert is_geodesic_polyline(poly) == SectorIndex(1, 1)
        assert geodesic_by_length(poly)

    def test_not_geodesic(self):
        poly = GeodesicPolyline(((0, 0), (2, 1), (0, 2)))
        assert is_geodesic_polyline(poly) is None
        assert not geodesic_by_length(poly)

    def test_single_segment(self):
        rng = random.Random(0)
        for _ in range(20):
            p = tuple(F(rng.randint(-9, 9)) for _ in range(3))
            q = tuple(F(rng.randint(-9, 9)) for _ in range(3))
            if p != q:
                assert is_geodesic_polyline(GeodesicPolyline((p, q))) is not None

    def test_validation(self):
        with pytest.raises(ValueError):
            GeodesicPolyline(((0, 0),))
        with pytest.raises(ValueError):
            GeodesicPolyline(((0, 0), (0, 0), (1, 1)))

    @settings(max_examples=100, deadline=None)
    @given(seeds)
    def test_matches_length_oracle(self, seed):
        rng = random.Random(seed)
        if rng.random() < 0.5:
            poly = random_geodesic(rng)
        else:
            dim = rng.randint(1, 3)
            pts = []
            while len(pts) < rng.randint(2, 5):
                p = tuple(F(rng.randint(-3, 3)) for _ in range(dim))
                if not pts or pts[-1] != p:
                    pts.append(p)
            if len(pts) < 2:
                return
            poly = GeodesicPolyline(tuple(pts))
        assert (is_geodesic_polyline(poly) is not None) == geodesic_by_length(poly)


class TestShorten:
    def test_example(self):
        poly = GeodesicPolyline(((0, 0), (1, 1), (2, F(1, 2))))
        out = shorten_geodesic(poly, F(1, 2), F(3, 2))
        assert out.breakpoints == ((0, 0), (F(1, 2), F(1, 2)), (1, F(1, 4)))
        assert out.length == 1
        assert is_geodesic_polyline(out) == SectorIndex(0, 1)

    def test_small_head(self):
        poly = GeodesicPolyline(((0, 0), (4, 1)))
        out = shorten_geodesic(poly, F(1, 1000), 3)
        assert out.breakpoints[0] == (0, 0)
        assert out.breakpoints[-1] == (F(1001, 1000), F(1001, 4000))

    def test_straight_segment(self):
        poly = GeodesicPolyline(((0, 0, 0), (6, 3, -6)))
        out = shorten_geodesic(poly, 2, F(5, 2))
        assert out.breakpoints[0] == (0, 0, 0)
        assert out.breakpoints[-1] == (F(11, 2), F(11, 4), F(-11, 2))
        assert all(p == tuple(x * p[0] / 6 for x in (6, 3, -6)) for p in out.breakpoints)
        assert out.length == 6 - F(1, 2)

    def test_errors(self):
        poly = GeodesicPolyline(((0, 0), (2, 1)))
        with pytest.raises(ValueError):
            shorten_geodesic(poly, 1, 1)
        with pytest.raises(ValueError):
            shorten_geodesic(poly, 0, 1)
        with pytest.raises(ValueError):
            shorten_geodesic(poly, 1, 2)
        with pytest.raises(NotGeodesicError):
            shorten_geodesic(GeodesicPolyline(((0, 0), (2, 1), (0, 2))), 1, 2)

    @settings(max_examples=60, deadline=None)
    @given(seeds)
    def test_matches_pointwise_formula(self, seed):
        rng = random.Random(seed)
        poly = random_geodesic(rng)
        b = poly.length
        c, d = sorted(b * F(x, 97) for x in rng.sample(range(1, 97), 2))
        out = shorten_geodesic(poly, c, d)
        assert out.length == b - (d - c)
        assert is_geodesic_polyline(out) is not None
        for _ in range(10):
            t = (b - d + c) * F(rng.randint(0, 50), 50)
            if t <= c:
                want = poly.at(t)
            else:
                want = tuple(x - y + z for x, y, z in zip(poly.at(t - c + d), poly.at(d), poly.at(c)))
            assert out.at(t) == want


class TestLeafDirectionStar:
    def test_fixed_point_on_star(self, unit_star):
        star = unit_star(4)
        emb = star_embed_linf(star, 2)
        got_star, got_emb = leaf_direction_star(star.to_tree(), emb)
        assert got_star.arms == star.arms and got_star.labels == star.labels
        assert got_emb.images == emb.images

    def test_h_tree_kuratowski(self, htree):
        star, emb = leaf_direction_star(htree, kuratowski_embed_linf(htree))
        assert star.k == 4
        assert verify_isometry(star.to_tree(), emb).passed

    def test_rejects_non_isometric(self, htree):
        bad = kuratowski_embed_linf(htree).with_image("l1", (0, 0, 0, 0))
        with pytest.raises(ValueError):
            leaf_direction_star(htree, bad)

    def test_arm_bound_over_random_trees(self):
        rng = random.Random(9)
        for _ in range(20):
            t = random_tree(rng)
            emb = kuratowski_embed_linf(t)
            star, semb = leaf_direction_star(t, emb)
            assert star.k <= 2 ** emb.dim
            assert verify_isometry(star.to_tree(), semb, samples=50).passed
            dirs = [semb[x] for x in star.labels]
            assert not any(positively_proportional(u, v) for u, v in combinations(dirs, 2))

    def test_proportional_helper(self):
        assert positively_proportional((2, 4), (1, 2))
        assert not positively_proportional((-2, -4), (1, 2))
        assert not positively_proportional((2, 3), (1, 2))
        assert DirectionConflict.__mro__[1] is AssertionError


class TestBounds:
    def test_four_star(self, unit_star):
        assert min_dim_linf_bounds(unit_star(4).to_tree()) == (2, 2)

    def test_five_leaves_general(self):
        t = build_tree([("a", "b", 1), ("a", "x1", 1), ("a", "x2", 1), ("b", "c", 1),
                        ("b", "x3", 1), ("c", "x4", 1), ("c", "x5", 1)])
        assert len(t.leaves()) == 5 and not t.is_star()
        assert min_dim_linf_bounds(t) == (3, 5)

    def test_path(self):
        assert min_dim_linf_bounds(build_tree([("a", "b", 1)])) == (1, 1)

    @pytest.mark.parametrize("k,lower", [(3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (16, 4), (17, 5)])
    def test_star_exact(self, k, lower):
        assert min_dim_linf_bounds(star_tree(*[1] * k).to_tree()) == (lower, lower)
