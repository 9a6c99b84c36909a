"""Triples, section tuples, the parametrizing space, truncation, fibers.

A triple mu = (rational space, weight filtration, graded pure structures)
fixes everything about a mixed Hodge structure except the position of the
Hodge filtration.  Points of T(mu) are tuples of sections of each
W_n -> Gr_n; two points give the same structure exactly when their
transported Hodge filtrations coincide, and that filtration is the
canonical representative of a point of S(mu).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import linalg as la
from . import mhs as mh
from .errors import DimensionMismatchError, MhsError, NotAnMhsError
from .field import Q, QI, GaussRat
from .linalg import Matrix, Subspace
from .mhs import (GradedPiece, HodgeFiltration, MixedHodgeStructure,
                  WeightFiltration)


@dataclass(frozen=True)
class Triple:
    """(dim, W, graded): a weight filtration plus pure structures on Gr^W."""

    dim: int
    W: WeightFiltration
    graded: Tuple[Tuple[int, MixedHodgeStructure], ...]  # ascending weight

    def piece(self, n: int) -> Optional[MixedHodgeStructure]:
        for m, g in self.graded:
            if m == n:
                return g
        return None


@dataclass(frozen=True)
class TPoint:
    """Sections alpha_n : Gr^W_n -> W_n (x) Q(i), one per graded piece."""

    sections: Tuple[Tuple[int, Matrix], ...]  # ascending weight

    def section(self, n: int) -> Matrix:
        for m, a in self.sections:
            if m == n:
                return a
        raise KeyError(n)


@dataclass(frozen=True)
class SPoint:
    """A point of the parametrizing space, represented by its filtration."""

    triple: Triple
    F: HodgeFiltration


@dataclass(frozen=True)
class LieData:
    w_minus1_end: Subspace      # over Q, inside End of the graded space
    f0_w_minus1_end: Subspace   # over QI


# -- validation ---------------------------------------------------------------

def triple_problems(mu: Triple) -> List[str]:
    out = mu.W.problems()
    pieces = mh.graded_pieces(mu.W)
    weights = [p.weight for p in pieces]
    if [n for n, _ in mu.graded] != weights:
        out.append("graded weights do not match the jumps of W")
        return out
    for piece, (n, g) in zip(pieces, mu.graded):
        if g.dim != piece.dim:
            out.append(f"graded piece at weight {n} has wrong dimension")
            continue
        if g.W.jumps != (n,):
            out.append(f"graded piece at weight {n} is not concentrated in weight {n}")
            continue
        probs = mh.validate_mhs(g)
        if probs:
            out.append(f"graded piece at weight {n} is not a pure structure: "
                       + "; ".join(probs))
    return out


def check_triple(mu: Triple) -> Triple:
    problems = triple_problems(mu)
    if problems:
        raise NotAnMhsError(problems)
    return mu


def triple_of(m: MixedHodgeStructure) -> Triple:
    """The triple underlying a validated structure: keep W, split off Gr^W."""
    mh.check_valid(m)
    return Triple(m.dim, m.W, tuple(mh.gr_w(m)))


def graded_space(mu: Triple) -> MixedHodgeStructure:
    """The split structure on graded block coordinates."""
    if mu.dim == 0:
        return mh.zero_mhs()
    out = None
    for _, g in mu.graded:
        out = g if out is None else mh.direct_sum(out, g)
    return out


def tpoint_problems(mu: Triple, alpha: TPoint) -> List[str]:
    out = []
    pieces = mh.graded_pieces(mu.W)
    if [n for n, _ in alpha.sections] != [p.weight for p in pieces]:
        return ["section weights do not match the jumps of W"]
    for piece, (n, a) in zip(pieces, alpha.sections):
        if len(a) != mu.dim or (a and len(a[0]) != piece.dim):
            out.append(f"section at weight {n} has wrong shape")
            continue
        if la.mat_mul(piece.pi_qi, a) != la.identity(QI, piece.dim):
            out.append(f"section at weight {n} does not split the projection")
        wn = mu.W.at(n).to_qi()
        if not wn.contains_subspace(la.image(QI, a, mu.dim)):
            out.append(f"section at weight {n} does not land in W_{n}")
    return out


def check_tpoint(mu: Triple, alpha: TPoint) -> TPoint:
    problems = tpoint_problems(mu, alpha)
    if problems:
        raise NotAnMhsError(problems)
    return alpha


# -- building structures from points ------------------------------------------

def build_mhs(mu: Triple, alpha: TPoint) -> MixedHodgeStructure:
    """Transport each graded Hodge filtration into the ambient space."""
    check_tpoint(mu, alpha)
    fjumps = sorted({p for _, g in mu.graded for p in g.F.jumps})
    f: Dict[int, Subspace] = {}
    for p in fjumps:
        total = Subspace.zero(QI, mu.dim)
        for (n, g), (_, a) in zip(mu.graded, alpha.sections):
            total = la.add(total, la.apply_to_subspace(a, g.F.at(p)))
        f[p] = total
    return mh.check_valid(mh.make_mhs(mu.dim, dict(mu.W.steps), f))


def spoint(mu: Triple, alpha: TPoint) -> SPoint:
    return SPoint(mu, build_mhs(mu, alpha).F)


def mhs_of_spoint(s: SPoint) -> MixedHodgeStructure:
    return MixedHodgeStructure(s.triple.dim, s.triple.W, s.F)


def matches_triple(mu: Triple, m: MixedHodgeStructure) -> bool:
    """Whether m has the weight filtration and associated graded of mu."""
    if m.dim != mu.dim or m.W != mu.W:
        return False
    return list(mh.gr_w(m)) == list(mu.graded)


def sections_from_mhs(mu: Triple, m: MixedHodgeStructure) -> TPoint:
    """The canonical point: the inverse of the splitting, block by block."""
    if not matches_triple(mu, m):
        raise NotAnMhsError(["structure is not associated to the triple"])
    ainv = la.invert(QI, mh.deligne_splitting(m))
    secs = []
    for piece in mh.graded_pieces(m.W):
        emb = la.to_qi_mat(mh.graded_embedding(piece, m.dim))
        secs.append((piece.weight, la.mat_mul(ainv, emb)))
    return TPoint(tuple(secs))


def total_section_matrix(mu: Triple, alpha: TPoint) -> Matrix:
    """The map from graded block coordinates to the ambient space."""
    cols: List[Tuple] = []
    for _, a in alpha.sections:
        cols.extend(la.transpose(a))
    return la.transpose(tuple(cols))


def equal_in_S(mu: Triple, alpha: TPoint, beta: TPoint) -> bool:
    """Filtration criterion: the two transported filtrations coincide."""
    return build_mhs(mu, alpha).F == build_mhs(mu, beta).F


def equal_in_S_group(mu: Triple, alpha: TPoint, beta: TPoint) -> bool:
    """Group criterion: alpha^{-1} beta preserves the graded filtration."""
    a = total_section_matrix(mu, alpha)
    b = total_section_matrix(mu, beta)
    u = la.mat_mul(la.invert(QI, a), b)
    gm = graded_space(mu)
    for p, s in gm.F.steps:
        if not s.contains_subspace(la.apply_to_subspace(u, s)):
            return False
    return True


# -- dimension of the parametrizing space -------------------------------------

def lie_data(mu: Triple) -> LieData:
    check_triple(mu)
    gm = graded_space(mu)
    if gm.dim == 0:
        return LieData(Subspace.zero(Q, 0), Subspace.zero(QI, 0))
    end = mh.hom(gm, gm)
    w_m1 = end.W.at(-1)
    f0 = la.intersect(end.F.at(0), w_m1.to_qi())
    return LieData(w_m1, f0)


def dim_S(mu: Triple) -> int:
    data = lie_data(mu)
    return data.w_minus1_end.dim - data.f0_w_minus1_end.dim


# -- sampling -----------------------------------------------------------------

def _random_fraction(rng: random.Random, height: int, nonzero: bool) -> Fraction:
    num = rng.randint(1, height) if nonzero else rng.randint(-height, height)
    if nonzero and rng.random() < 0.5:
        num = -num
    return Fraction(num, rng.randint(1, height))


def _sample(mu: Triple, rng: random.Random, height: int,
            imaginary: bool) -> TPoint:
    check_triple(mu)
    secs = []
    prev = Subspace.zero(Q, mu.dim)
    for piece in mh.graded_pieces(mu.W):
        base = la.to_qi_mat(piece.section)
        if prev.dim:
            incl = la.to_qi_mat(la.inclusion_map(prev))
            r = la.mat(QI, [[GaussRat(_random_fraction(rng, height, False),
                                      _random_fraction(rng, height, True)
                                      if imaginary else 0)
                             for _ in range(piece.dim)]
                            for _ in range(prev.dim)])
            base = la.mat_add(base, la.mat_mul(incl, r))
        secs.append((piece.weight, base))
        prev = mu.W.at(piece.weight)
    return TPoint(tuple(secs))


def sample_point(mu: Triple, seed, height: int) -> TPoint:
    """Deterministic sample with nonzero imaginary off-diagonal entries."""
    if height < 1:
        raise MhsError("height must be at least 1")
    return _sample(mu, random.Random(str(seed)), height, imaginary=True)


def sample_rational_point(mu: Triple, seed, height: int) -> TPoint:
    """Deterministic sample with all-rational off-diagonal entries."""
    if height < 1:
        raise MhsError("height must be at least 1")
    return _sample(mu, random.Random(str(seed)), height, imaginary=False)


# -- truncation ---------------------------------------------------------------

def zero_triple() -> Triple:
    return Triple(0, WeightFiltration(0, ()), ())


def _transport(mu: Triple, proj: Matrix, keep, new_w: WeightFiltration,
               new_dim: int) -> Triple:
    """Move graded pure structures along an ambient map (restriction or
    quotient), re-expressing each in the coordinates of the new triple."""
    new_pieces = {p.weight: p for p in mh.graded_pieces(new_w)}
    graded = []
    for piece, (n, g) in zip(mh.graded_pieces(mu.W), mu.graded):
        if not keep(n):
            continue
        t = la.mat_mul(new_pieces[n].pi_q,
                       la.mat_mul(proj, piece.section))
        f = {p: la.apply_to_subspace(la.to_qi_mat(t), g.F.at(p))
             for p in g.F.jumps}
        graded.append((n, mh.make_mhs(g.dim, {n: Subspace.full(Q, g.dim)}, f)))
    return Triple(new_dim, new_w, tuple(graded))


def truncate(mu: Triple, p: int) -> Tuple[Triple, Triple]:
    """The two truncated triples carried by W_p and by the quotient."""
    check_triple(mu)
    wp = mu.W.at(p)
    if wp.is_zero():
        return zero_triple(), mu
    if wp.is_full():
        return mu, zero_triple()
    sel = la.coords_map(wp)
    k = wp.dim
    w_low = WeightFiltration.of(
        k, {n: la.apply_to_subspace(sel, s) for n, s in mu.W.steps if n <= p})
    low = _transport(mu, sel, lambda n: n <= p, w_low, k)
    proj = la.quotient_map(wp)
    kq = mu.dim - k
    w_high = WeightFiltration.of(
        kq, {n: la.apply_to_subspace(proj, s) for n, s in mu.W.steps if n > p})
    high = _transport(mu, proj, lambda n: n > p, w_high, kq)
    return low, high


def _transport_point(mu: Triple, new: Triple, proj: Matrix, keep,
                     alpha: TPoint) -> TPoint:
    new_pieces = {piece.weight: piece for piece in mh.graded_pieces(new.W)}
    proj_qi = la.to_qi_mat(proj)
    secs = []
    for piece, (n, a) in zip(mh.graded_pieces(mu.W), alpha.sections):
        if not keep(n):
            continue
        t = la.mat_mul(new_pieces[n].pi_q, la.mat_mul(proj, piece.section))
        secs.append((n, la.mat_mul(la.mat_mul(proj_qi, a),
                                   la.invert(QI, la.to_qi_mat(t)))))
    return TPoint(tuple(secs))


def truncate_point(mu: Triple, p: int, alpha: TPoint) -> Tuple[TPoint, TPoint]:
    """Restrict and project a section tuple to the truncated triples."""
    check_tpoint(mu, alpha)
    low, high = truncate(mu, p)
    wp = mu.W.at(p)
    if wp.is_zero():
        return TPoint(()), alpha
    if wp.is_full():
        return alpha, TPoint(())
    a_low = _transport_point(mu, low, la.coords_map(wp), lambda n: n <= p, alpha)
    a_high = _transport_point(mu, high, la.quotient_map(wp), lambda n: n > p, alpha)
    return a_low, a_high


# -- fibers -------------------------------------------------------------------

def fiber_point(mu: Triple, p: int, x: SPoint, y: SPoint,
                psi: Matrix) -> SPoint:
    """Assemble a point of mu from truncated points and a gluing section.

    psi maps quotient coordinates back into the ambient space and must
    split the projection; the resulting filtration is the image of x's
    filtration plus psi of y's.
    """
    check_triple(mu)
    wp = mu.W.at(p)
    if wp.is_zero() or wp.is_full():
        raise DimensionMismatchError("truncation index must split the weights")
    low, high = truncate(mu, p)
    if x.triple != low or y.triple != high:
        raise NotAnMhsError(["points do not match the truncated triples"])
    proj_qi = la.to_qi_mat(la.quotient_map(wp))
    if la.mat_mul(proj_qi, psi) != la.identity(QI, mu.dim - wp.dim):
        raise NotAnMhsError(["gluing map is not a section of the projection"])
    incl_qi = la.to_qi_mat(la.inclusion_map(wp))
    jumps = sorted(set(x.F.jumps) | set(y.F.jumps))
    f = {q: la.add(la.apply_to_subspace(incl_qi, x.F.at(q)),
                   la.apply_to_subspace(psi, y.F.at(q)))
         for q in jumps}
    m = mh.check_valid(mh.make_mhs(mu.dim, dict(mu.W.steps), f))
    return SPoint(mu, m.F)


def fiber_dim(mu: Triple, p: int, x: SPoint, y: SPoint) -> int:
    """Dimension of the space of points lying over a truncated pair."""
    check_triple(mu)
    wp = mu.W.at(p)
    if wp.is_zero() or wp.is_full():
        return 0
    h = mh.hom(mhs_of_spoint(y), mhs_of_spoint(x))
    return h.dim - h.F.at(0).dim
