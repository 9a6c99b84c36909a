"""Parametrizing space: triples, section tuples, truncation, fibers."""

from fractions import Fraction

import pytest

from helpers import random_mhs, random_triple
from mhslab import corpus
from mhslab import linalg as la
from mhslab import mhs as mh
from mhslab import triples as tr
from mhslab import unipotent as un
from mhslab.errors import NotAnMhsError
from mhslab.field import Q, QI, GaussRat, I
from mhslab.linalg import Subspace

SEEDS = range(10)


# -- triples and points --------------------------------------------------------

def test_corpus_triples_validate():
    for mu in [corpus.kummer_triple(), corpus.tate3_triple(),
               corpus.two_weight_triple(), tr.zero_triple()]:
        assert not tr.triple_problems(mu)


def test_bad_triple_rejected():
    mu = corpus.kummer_triple()
    # Swap in a graded piece of the wrong weight.
    bad = tr.Triple(mu.dim, mu.W, ((-2, mh.tate_twist(1)),
                                   (0, mh.tate_twist(1))))
    assert tr.triple_problems(bad)
    with pytest.raises(NotAnMhsError):
        tr.check_triple(bad)


def test_tpoint_validation():
    mu = corpus.kummer_triple()
    alpha = corpus.kummer_tpoint(I)
    assert not tr.tpoint_problems(mu, alpha)
    # A non-section (pi . alpha != id) is rejected.
    bad = tr.TPoint(((-2, la.mat(QI, [[2], [0]])), alpha.sections[1]))
    assert tr.tpoint_problems(mu, bad)


def test_build_kummer():
    for z in [GaussRat(0), GaussRat(Fraction(1, 2)), I, GaussRat(1, 1)]:
        m = tr.build_mhs(corpus.kummer_triple(), corpus.kummer_tpoint(z))
        assert m == corpus.kummer_mhs(z)


def test_triple_of_round_trip():
    for s in SEEDS:
        m = random_mhs(s, max_dim=5)
        mu = tr.triple_of(m)
        assert not tr.triple_problems(mu)
        assert tr.matches_triple(mu, m)
        assert mu.W == m.W


# -- build / sections round trip -----------------------------------------------

def test_build_sections_identity():
    for s in SEEDS:
        mu = random_triple(s, max_dim=5)
        alpha = tr.sample_point(mu, f"pt:{s}", 7)
        m = tr.build_mhs(mu, alpha)
        beta = tr.sections_from_mhs(mu, m)
        assert not tr.tpoint_problems(mu, beta)
        assert tr.build_mhs(mu, beta) == m
        assert tr.equal_in_S(mu, alpha, beta)


# -- equality criteria ----------------------------------------------------------

def _perturbed_point(mu, alpha, k):
    """A different representative of the same point: compose the total
    section matrix with exp(u) = 1 + u for u in F^0 of W_{-1}End(graded)."""
    data = tr.lie_data(mu)
    f0 = data.f0_w_minus1_end
    if f0.is_zero():
        return alpha
    u = mh.hom_mat(f0.basis[k % f0.dim], mu.dim, mu.dim)
    total = la.mat_mul(tr.total_section_matrix(mu, alpha),
                       la.mat_add(la.identity(QI, mu.dim), u))
    cols = la.transpose(total)
    secs, at = [], 0
    for n, a in alpha.sections:
        g = len(la.transpose(a))
        secs.append((n, la.transpose(cols[at:at + g])))
        at += g
    return tr.TPoint(tuple(secs))


def test_equality_criteria_agree_on_equal_pairs():
    for s in SEEDS:
        mu = random_triple(s, max_dim=5)
        alpha = tr.sample_point(mu, f"eq:{s}", 7)
        beta = _perturbed_point(mu, alpha, s)
        assert not tr.tpoint_problems(mu, beta)
        assert tr.equal_in_S(mu, alpha, beta)
        assert tr.equal_in_S_group(mu, alpha, beta)


def test_equality_criteria_agree_on_random_pairs():
    for s in SEEDS:
        mu = random_triple(s, max_dim=5)
        alpha = tr.sample_point(mu, f"a:{s}", 7)
        beta = tr.sample_point(mu, f"b:{s}", 7)
        assert tr.equal_in_S(mu, alpha, beta) == \
            tr.equal_in_S_group(mu, alpha, beta)


def test_distinct_points_when_space_is_positive_dimensional():
    mu = corpus.kummer_triple()
    alpha = tr.sample_point(mu, "x", 7)
    beta = tr.sample_point(mu, "y", 7)
    assert not tr.equal_in_S(mu, alpha, beta)


# -- sampling -------------------------------------------------------------------

def test_sampler_determinism():
    mu = corpus.tate3_triple()
    assert tr.sample_point(mu, 42, 10) == tr.sample_point(mu, 42, 10)
    assert tr.sample_point(mu, 42, 10) != tr.sample_point(mu, 43, 10)


def test_sampler_field_of_definition():
    mu = corpus.tate3_triple()
    imag = tr.sample_point(mu, 1, 10)
    rat = tr.sample_rational_point(mu, 1, 10)
    def entries(alpha):
        return [x for _, a in alpha.sections for row in a for x in row]
    assert any(not x.is_rational() for x in entries(imag))
    assert all(x.is_rational() for x in entries(rat))


def test_sampled_points_build_valid_structures():
    for s in SEEDS:
        mu = random_triple(s, max_dim=5)
        for maker in [tr.sample_point, tr.sample_rational_point]:
            alpha = maker(mu, f"v:{s}", 6)
            assert not tr.tpoint_problems(mu, alpha)
            assert mh.is_valid(tr.build_mhs(mu, alpha))


# -- dimension of the space -----------------------------------------------------

def test_dim_s_examples():
    assert tr.dim_S(corpus.kummer_triple()) == 1
    assert tr.dim_S(corpus.tate3_triple()) == 3
    pure = tr.triple_of(mh.tate_twist(2))
    assert tr.dim_S(pure) == 0
    assert tr.dim_S(tr.zero_triple()) == 0


def test_lie_data_bracket_closed():
    for mu in [corpus.kummer_triple(), corpus.tate3_triple(),
               corpus.two_weight_triple()]:
        data = tr.lie_data(mu)
        assert un.end_subspace_is_bracket_closed(data.w_minus1_end, mu.dim)


# -- truncation -----------------------------------------------------------------

def test_truncate_tate3():
    mu = corpus.tate3_triple()
    low, high = tr.truncate(mu, -2)
    assert low.dim == 2 and [n for n, _ in low.graded] == [-6, -2]
    assert high.dim == 1 and [n for n, _ in high.graded] == [0]
    assert not tr.triple_problems(low) and not tr.triple_problems(high)
    # Degenerate cuts return the zero triple on one side.
    assert tr.truncate(mu, -7) == (tr.zero_triple(), mu)
    assert tr.truncate(mu, 0)[1] == tr.zero_triple()


def test_truncation_commutes_with_build():
    for s in SEEDS:
        mu = random_triple(s, max_dim=5)
        cuts = [p for p in mu.W.jumps
                if not mu.W.at(p).is_zero() and not mu.W.at(p).is_full()]
        alpha = tr.sample_point(mu, f"tr:{s}", 6)
        m = tr.build_mhs(mu, alpha)
        for p in cuts:
            low, high = tr.truncate(mu, p)
            a_low, a_high = tr.truncate_point(mu, p, alpha)
            wp = mu.W.at(p)
            sel = la.coords_map(wp)
            # Build of the truncated point = truncation of the built structure.
            m_low = tr.build_mhs(low, a_low)
            sub = mh.sub_mhs(m, wp)
            assert m_low.F == sub.F and m_low.W == sub.W
            m_high = tr.build_mhs(high, a_high)
            quo = mh.quotient_mhs(m, wp)
            assert m_high.F == quo.F and m_high.W == quo.W


# -- fibers ---------------------------------------------------------------------

def test_fiber_point_reassembles_kummer():
    mu = corpus.kummer_triple()
    z = GaussRat(Fraction(1, 3), Fraction(2, 5))
    low, high = tr.truncate(mu, -2)
    a_low, a_high = tr.truncate_point(mu, -2, corpus.kummer_tpoint(z))
    x = tr.spoint(low, a_low)
    y = tr.spoint(high, a_high)
    psi = la.mat(QI, [[z], [1]])
    s = tr.fiber_point(mu, -2, x, y, psi)
    assert tr.mhs_of_spoint(s) == corpus.kummer_mhs(z)
    # A non-section gluing map is rejected.
    with pytest.raises(NotAnMhsError):
        tr.fiber_point(mu, -2, x, y, la.mat(QI, [[z], [2]]))


def test_fiber_dim_examples():
    mu = corpus.kummer_triple()
    low, high = tr.truncate(mu, -2)
    alpha = corpus.kummer_tpoint(I)
    a_low, a_high = tr.truncate_point(mu, -2, alpha)
    x, y = tr.spoint(low, a_low), tr.spoint(high, a_high)
    assert tr.fiber_dim(mu, -2, x, y) == 1

    mu3 = corpus.tate3_triple()
    low3, high3 = tr.truncate(mu3, -2)
    b = tr.sample_point(mu3, "f", 5)
    b_low, b_high = tr.truncate_point(mu3, -2, b)
    x3, y3 = tr.spoint(low3, b_low), tr.spoint(high3, b_high)
    assert tr.fiber_dim(mu3, -2, x3, y3) == 2


def test_fiber_dims_are_positive_across_corpus_cuts():
    for mu in [corpus.kummer_triple(), corpus.tate3_triple(),
               corpus.two_weight_triple()]:
        alpha = tr.sample_point(mu, "cuts", 5)
        for p in mu.W.jumps[:-1]:
            low, high = tr.truncate(mu, p)
            a_low, a_high = tr.truncate_point(mu, p, alpha)
            x, y = tr.spoint(low, a_low), tr.spoint(high, a_high)
            assert tr.fiber_dim(mu, p, x, y) >= 1
