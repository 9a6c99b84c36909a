"""Lifting graded subobjects, construction terms, loci along pencils."""

import itertools
from fractions import Fraction

import pytest

from helpers import random_mhs
from mhslab import corpus
from mhslab import linalg as la
from mhslab import loci as lo
from mhslab import mhs as mh
from mhslab import triples as tr
from mhslab.errors import (LocusError, NotAnMhsError, NotASubobjectError,
                           ParseError)
from mhslab.field import Q, QI, GaussRat, I
from mhslab.linalg import Subspace

HALF = GaussRat(Fraction(1, 2))

GR_Q0_LINE = Subspace.span(Q, 2, [(0, 1)])   # the Q(0) line, graded coords
GR_Q1_LINE = Subspace.span(Q, 2, [(1, 0)])   # the Q(1) line = W_{-2}


def _exhaustive_lifts(m, height=4):
    """All small rational lines of a Kummer structure that are subobjects
    projecting isomorphically onto the graded Q(0) line."""
    found = []
    nums = range(-height, height + 1)
    dens = range(1, height + 1)
    for a in sorted({Fraction(n, d) for n in nums for d in dens}):
        line = Subspace.span(Q, 2, [(a, 1)])
        if mh.try_sub_mhs(m, line) is not None:
            found.append(line)
    return found


# -- lifting -------------------------------------------------------------------

@pytest.mark.parametrize("z", [GaussRat(0), HALF, I, GaussRat(1, 1)])
def test_can_lift_matches_exhaustive_search(z):
    m = corpus.kummer_mhs(z)
    lift = lo.can_lift(m, GR_Q0_LINE)
    oracle = _exhaustive_lifts(m)
    if z.is_rational():
        assert lift is not None
        assert oracle and all(s == lift for s in oracle)  # unique
    else:
        assert lift is None
        assert not oracle


def test_can_lift_trivial_cases():
    m = corpus.kummer_mhs(I)
    assert lo.can_lift(m, Subspace.zero(Q, 2)) == Subspace.zero(Q, 2)
    assert lo.can_lift(m, Subspace.full(Q, 2)) == Subspace.full(Q, 2)
    # The weight subspace always lifts to itself.
    assert lo.can_lift(m, GR_Q1_LINE) == GR_Q1_LINE


def test_can_lift_explicit_value():
    m = corpus.kummer_mhs(HALF)
    lift = lo.can_lift(m, GR_Q0_LINE)
    assert lift == Subspace.span(Q, 2, [(Fraction(1, 2), 1)])


def test_can_lift_rejects_non_subobjects():
    m = corpus.kummer_mhs(I)
    # A line that is not a subobject of the graded space (wrong weight type).
    with pytest.raises(NotASubobjectError):
        lo.can_lift(m, Subspace.span(Q, 2, [(1, 1)]))


# -- construction terms ----------------------------------------------------------

def test_eval_construction_terms():
    m = corpus.kummer_mhs(I)
    assert lo.eval_construction(lo.SELF, m) == m
    assert lo.eval_construction(["DUAL", lo.SELF], m) == mh.dual(m)
    assert lo.eval_construction(["HOM", lo.SELF, lo.SELF], m) == mh.hom(m, m)
    assert lo.eval_construction(["TENSOR", lo.SELF, lo.SELF], m) \
        == mh.tensor(m, m)
    assert lo.eval_construction(["WSUB", -2, lo.SELF], m) == mh.tate_twist(1)
    assert lo.eval_construction(["QUOT", [["1", "0"]], lo.SELF], m) \
        == mh.tate_twist(0)


def test_malformed_terms_rejected():
    m = corpus.kummer_mhs(I)
    for bad in [["DUAL"], ["HOM", lo.SELF], ["NOPE", lo.SELF], [], 7,
                ["WSUB", "x", lo.SELF]]:
        with pytest.raises(ParseError):
            lo.eval_construction(bad, m)


# -- pencils ----------------------------------------------------------------------

def kummer_pencil(shift=GaussRat(0)):
    """The Kummer family as a pencil: member at t is kummer_mhs(t + shift)."""
    mu = corpus.kummer_triple()
    alpha = corpus.kummer_tpoint(GaussRat(0))
    low, high = tr.truncate(mu, -2)
    a_low, a_high = tr.truncate_point(mu, -2, alpha)
    x, y = tr.spoint(low, a_low), tr.spoint(high, a_high)
    psi0 = la.mat(QI, [[shift], [1]])
    dpsi = la.mat(QI, [[1], [0]])
    return lo.Pencil(mu, -2, x, y, psi0, dpsi)


def test_pencil_members():
    pencil = kummer_pencil()
    assert not pencil.problems()
    for t in [GaussRat(0), HALF, I]:
        assert lo.pencil_member(pencil, t) == corpus.kummer_mhs(t)


def test_bad_pencils_rejected():
    good = kummer_pencil()
    bad_base = lo.Pencil(good.triple, good.p, good.x, good.y,
                         la.mat(QI, [[0], [2]]), good.dpsi)
    assert bad_base.problems()
    zero_dir = lo.Pencil(good.triple, good.p, good.x, good.y, good.psi0,
                         la.mat(QI, [[0], [0]]))
    assert zero_dir.problems()
    with pytest.raises(NotAnMhsError):
        lo.locus_on_pencil(zero_dir, [1, 0, 0, 1], ["HOM", lo.SELF, lo.SELF])


END = ["HOM", lo.SELF, lo.SELF]
ID_VEC = [1, 0, 0, 1]          # identity endomorphism in hom coordinates
PROJ_VEC = [0, 0, 0, 1]        # idempotent projecting onto the Q(0) line
RAISE_VEC = [0, 1, 0, 0]       # weight-raising map, outside W_0


def test_locus_identity_is_all():
    res = lo.locus_on_pencil(kummer_pencil(), ID_VEC, END)
    assert res.is_all and not res.outside_w0


def test_locus_splitting_witness_is_single_point():
    res = lo.locus_on_pencil(kummer_pencil(), PROJ_VEC, END)
    assert res.kind == "AFFINE_SUBSET" and not res.outside_w0
    assert res.solution() == GaussRat(0)


def test_locus_respects_reparametrization():
    # Shifting the base point of the pencil shifts the single solution.
    res = lo.locus_on_pencil(kummer_pencil(shift=GaussRat(1)), PROJ_VEC, END)
    assert res.solution() == GaussRat(-1)
    res = lo.locus_on_pencil(kummer_pencil(shift=I), PROJ_VEC, END)
    assert res.solution() == -I


def test_locus_outside_w0():
    res = lo.locus_on_pencil(kummer_pencil(), RAISE_VEC, END)
    assert res.outside_w0 and res.kind == "AFFINE_SUBSET"
    assert res.constraints == ((GaussRat(0), GaussRat(0), GaussRat(1)),)


def test_locus_of_zero_vector_is_all():
    res = lo.locus_on_pencil(kummer_pencil(), [0, 0, 0, 0], END)
    assert res.is_all


def test_locus_constraints_never_involve_conjugate():
    for v in [ID_VEC, PROJ_VEC, [0, 0, 1, 1]]:
        res = lo.locus_on_pencil(kummer_pencil(), v, END)
        assert all(b == GaussRat(0) for _, b, _ in res.constraints)


def test_locus_agrees_with_pointwise_scan():
    pencil = kummer_pencil()
    res = lo.locus_on_pencil(pencil, PROJ_VEC, END)
    for t in [GaussRat(0), GaussRat(1), GaussRat(-2), I, HALF]:
        member = lo.eval_construction(END, lo.pencil_member(pencil, t))
        pointwise = member.F.at(0).contains(
            tuple(GaussRat(x) for x in PROJ_VEC))
        predicted = all(a * t + b * t.conj() + c == GaussRat(0)
                        for a, b, c in res.constraints)
        assert pointwise == predicted


# -- family probes -----------------------------------------------------------------

def _kummer_samples(zs):
    mu = corpus.kummer_triple()
    return [tr.spoint(mu, corpus.kummer_tpoint(z)) for z in zs]


def test_global_probe():
    samples = _kummer_samples([GaussRat(0), HALF, I, GaussRat(1, 1)])
    kind, witness = lo.global_hodge_subspace_probe(
        corpus.kummer_triple(), GR_Q1_LINE, lo.SELF, samples)
    assert kind == "GLOBAL_ON_SAMPLES" and witness is None
    kind, witness = lo.global_hodge_subspace_probe(
        corpus.kummer_triple(), GR_Q0_LINE, lo.SELF, samples)
    assert kind == "FAILS_AT" and witness in samples


def test_quotient_at_point():
    s = _kummer_samples([I])[0]
    w_m2_end = Subspace.span(Q, 4, [(0, 0, 1, 0)])  # maps lowering weight by 2
    quo = lo.quotient_at_point(s, w_m2_end, END)
    assert mh.is_valid(quo) and quo.dim == 3
    dims = {n: pure.dim for n, pure in mh.gr_w(quo)}
    assert dims == {0: 2, 2: 1}
    # Quotient commutes with taking the associated graded (dimensions).
    end = lo.eval_construction(END, tr.mhs_of_spoint(s))
    assert sum(dims.values()) == end.dim - w_m2_end.dim
