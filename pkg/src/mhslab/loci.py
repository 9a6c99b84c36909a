"""Subobject lifting, Hodge loci along pencils, and derived-family probes.

A pencil is an affine line of gluing sections inside one fiber of the
truncation map; the locus of parameters where a fixed rational vector is
a weight-zero Hodge class in a derived structure (built from the family
member by duals, tensors, homs, weight subs and quotients) is computed
symbolically over Q(i)[t] and cross-validated by exact evaluation at the
candidate points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from . import linalg as la
from . import mhs as mh
from . import triples as tr
from .errors import LocusError, NotAnMhsError, NotASubobjectError, ParseError
from .field import Q, QI, GaussRat
from .linalg import Matrix, Subspace
from .mhs import MixedHodgeStructure, WeightFiltration
from .triples import SPoint, Triple


# -- subobject lifting --------------------------------------------------------

def can_lift(m: MixedHodgeStructure, a_tilde_q: Subspace) -> Optional[Subspace]:
    """Lift a rational subobject of the associated graded into m, if possible.

    a_tilde_q lives in graded block coordinates.  The lift exists exactly
    when the inverse Deligne splitting carries each weight piece of the
    subobject to a subspace defined over Q; it is then unique, and its
    rational points are returned.
    """
    gm = mh.graded_mhs(m)
    mh.sub_mhs(gm, a_tilde_q)  # raises if not a subobject of the graded
    if a_tilde_q.is_zero():
        return a_tilde_q
    alpha = la.invert(QI, mh.deligne_splitting(m))
    a_c = a_tilde_q.to_qi()
    for n in gm.W.jumps:
        piece = la.intersect(a_c, gm.W.at(n).to_qi())
        if not la.is_defined_over_q(la.apply_to_subspace(alpha, piece)):
            return None
    lift = la.rational_part(la.apply_to_subspace(alpha, a_c))
    if lift.dim != a_tilde_q.dim:
        return None
    mh.sub_mhs(m, lift)  # the lemma guarantees this validates
    return lift


# -- construction term language ----------------------------------------------

SELF = "SELF"


def _check_term(term) -> None:
    if term == SELF:
        return
    if not isinstance(term, (list, tuple)) or not term:
        raise ParseError(f"malformed construction term {term!r}")
    head = term[0]
    if head == "DUAL" and len(term) == 2:
        _check_term(term[1])
    elif head in ("TENSOR", "HOM") and len(term) == 3:
        _check_term(term[1])
        _check_term(term[2])
    elif head == "WSUB" and len(term) == 3 and isinstance(term[1], int):
        _check_term(term[2])
    elif head == "QUOT" and len(term) == 3:
        _check_term(term[2])
    else:
        raise ParseError(f"malformed construction term {term!r}")


def _quot_subspace(spec_rows, ambient: int) -> Subspace:
    from .field import parse_q
    rows = [[parse_q(x) if isinstance(x, str) else Fraction(x)
             for x in row] for row in spec_rows]
    return Subspace.span(Q, ambient, rows)


def eval_construction(term, m: MixedHodgeStructure) -> MixedHodgeStructure:
    """Evaluate a construction term at a single structure, exactly."""
    _check_term(term)
    return _eval(term, m)


def _eval(term, m: MixedHodgeStructure) -> MixedHodgeStructure:
    if term == SELF:
        return m
    head = term[0]
    if head == "DUAL":
        return mh.dual(_eval(term[1], m))
    if head == "TENSOR":
        return mh.tensor(_eval(term[1], m), _eval(term[2], m))
    if head == "HOM":
        return mh.hom(_eval(term[1], m), _eval(term[2], m))
    if head == "WSUB":
        inner = _eval(term[2], m)
        return mh.sub_mhs(inner, inner.W.at(term[1]))
    if head == "QUOT":
        inner = _eval(term[2], m)
        return mh.quotient_mhs(inner, _quot_subspace(term[1], inner.dim))
    raise ParseError(f"unknown construction head {head!r}")


# -- pencils ------------------------------------------------------------------

@dataclass(frozen=True)
class Pencil:
    """psi(t) = psi0 + t * dpsi inside a fiber of truncation at p."""

    triple: Triple
    p: int
    x: SPoint
    y: SPoint
    psi0: Matrix
    dpsi: Matrix

    def problems(self) -> List[str]:
        out = []
        wp = self.triple.W.at(self.p)
        if wp.is_zero() or wp.is_full():
            return ["truncation index must split the weights"]
        proj = la.to_qi_mat(la.quotient_map(wp))
        k = self.triple.dim - wp.dim
        if la.mat_mul(proj, self.psi0) != la.identity(QI, k):
            out.append("base is not a section of the projection")
        if la.mat_mul(proj, self.dpsi) != la.zeros(QI, k, k):
            out.append("direction does not take values in the weight subspace")
        if self.dpsi == la.zeros(QI, self.triple.dim, k):
            out.append("direction is zero")
        return out


def pencil_member(pencil: Pencil, t: GaussRat) -> MixedHodgeStructure:
    psi = la.mat_add(pencil.psi0, la.mat_scale(t, pencil.dpsi))
    s = tr.fiber_point(pencil.triple, pencil.p, pencil.x, pencil.y, psi)
    return tr.mhs_of_spoint(s)


@dataclass(frozen=True)
class LocusResult:
    """Where along the pencil a vector is a weight-zero Hodge class.

    Constraints are triples (a, b, c) for a*t + b*conj(t) + c = 0 over
    Q(i); kind is ALL exactly when no nontrivial constraint remains.
    """

    kind: str  # "ALL" or "AFFINE_SUBSET"
    constraints: Tuple[Tuple[GaussRat, GaussRat, GaussRat], ...]
    outside_w0: bool = False

    @property
    def is_all(self) -> bool:
        return self.kind == "ALL"

    def solution(self) -> Optional[GaussRat]:
        """The single solution, when the constraints pin one down."""
        for a, b, c in self.constraints:
            if a and not b:
                return -c / a
        return None


# -- symbolic evaluation over Q(i)[t] -----------------------------------------

_T = sp.Symbol("t")


def _sym(x: GaussRat):
    return sp.Rational(x.re.numerator, x.re.denominator) + \
        sp.I * sp.Rational(x.im.numerator, x.im.denominator)


def _sym_mat(a: Matrix) -> sp.Matrix:
    return sp.Matrix([[_sym(x) for x in row] for row in a])


def _gauss(expr) -> GaussRat:
    expr = sp.nsimplify(sp.expand(expr))
    re, im = expr.as_real_imag()
    if not (re.is_rational and im.is_rational):
        raise LocusError(f"non-Gaussian-rational value {expr}")
    return GaussRat(Fraction(sp.Rational(re).p, sp.Rational(re).q),
                    Fraction(sp.Rational(im).p, sp.Rational(im).q))


@dataclass(frozen=True)
class _SymMHS:
    """A family of structures: exact W, Hodge generators polynomial in t."""

    dim: int
    W: WeightFiltration
    fgens: Tuple[Tuple[int, sp.Matrix], ...]  # p -> dim x k generator matrix

    def fgen_at(self, p: int) -> sp.Matrix:
        for q, g in self.fgens:
            if q >= p:
                return g
        return sp.zeros(self.dim, 0)

    @property
    def fjumps(self):
        return tuple(p for p, _ in self.fgens)


def _sym_nullspace(a: sp.Matrix) -> sp.Matrix:
    """Columns spanning the generic right kernel, with denominators cleared."""
    if a.cols == 0:
        return sp.zeros(0, 0)
    out = []
    for c in a.nullspace():
        c = sp.simplify(c)
        scale = sp.lcm([sp.fraction(sp.cancel(e))[1] for e in c] or [1])
        out.append(sp.expand(c * scale))
    if not out:
        return sp.zeros(a.cols, 0)
    return sp.Matrix.hstack(*out)


def _sym_member(pencil: Pencil) -> _SymMHS:
    mu = pencil.triple
    wp = mu.W.at(pencil.p)
    incl = _sym_mat(la.to_qi_mat(la.inclusion_map(wp)))
    psi = _sym_mat(pencil.psi0) + _T * _sym_mat(pencil.dpsi)
    jumps = sorted(set(pencil.x.F.jumps) | set(pencil.y.F.jumps))
    fgens = []
    for q in jumps:
        gx = incl * _sym_mat(la.transpose(pencil.x.F.at(q).basis)) \
            if pencil.x.F.at(q).dim else sp.zeros(mu.dim, 0)
        gy = psi * _sym_mat(la.transpose(pencil.y.F.at(q).basis)) \
            if pencil.y.F.at(q).dim else sp.zeros(mu.dim, 0)
        fgens.append((q, sp.Matrix.hstack(gx, gy)))
    return _SymMHS(mu.dim, mu.W, tuple(fgens))


def _sym_dual(m: _SymMHS) -> _SymMHS:
    exact = mh.dual(MixedHodgeStructure(
        m.dim, m.W, mh.HodgeFiltration.of(m.dim, {0: Subspace.full(QI, m.dim)})))
    fgens = []
    if m.fjumps:
        for p in range(-max(m.fjumps), -min(m.fjumps) + 2):
            g = m.fgen_at(-p + 1)
            fgens.append((p, _sym_nullspace(g.T)))
    return _SymMHS(m.dim, exact.W, tuple(fgens))


def _sym_tensor(m: _SymMHS, n: _SymMHS) -> _SymMHS:
    wm = MixedHodgeStructure(m.dim, m.W, mh.HodgeFiltration.of(
        m.dim, {0: Subspace.full(QI, m.dim)}))
    wn = MixedHodgeStructure(n.dim, n.W, mh.HodgeFiltration.of(
        n.dim, {0: Subspace.full(QI, n.dim)}))
    w = mh.tensor(wm, wn).W
    fgens = []
    for p in sorted({a + b for a in m.fjumps for b in n.fjumps}):
        cols = []
        for a in m.fjumps:
            ga, gb = m.fgen_at(a), n.fgen_at(p - a)
            for i in range(ga.cols):
                for j in range(gb.cols):
                    cols.append(_kron_col(ga.col(i), gb.col(j)))
        fgens.append((p, sp.Matrix.hstack(*cols)
                      if cols else sp.zeros(m.dim * n.dim, 0)))
    return _SymMHS(m.dim * n.dim, w, tuple(fgens))


def _kron_col(u: sp.Matrix, v: sp.Matrix) -> sp.Matrix:
    return sp.Matrix([u[i] * v[j] for i in range(u.rows) for j in range(v.rows)])


def _sym_wsub(m: _SymMHS, p: int) -> _SymMHS:
    wp = m.W.at(p)
    sel = _sym_mat(la.to_qi_mat(la.coords_map(wp)))
    eqs = _sym_mat(la.to_qi_mat(la.equations(wp)))
    w = WeightFiltration.of(wp.dim, {
        n: la.apply_to_subspace(la.coords_map(wp), la.intersect(s, wp))
        for n, s in m.W.steps})
    fgens = []
    for q, g in m.fgens:
        if eqs.rows == 0:
            fgens.append((q, sel * g))
            continue
        combos = _sym_nullspace(eqs * g)
        fgens.append((q, sel * g * combos))
    return _SymMHS(wp.dim, w, tuple(fgens))


def _sym_quot(m: _SymMHS, a_q: Subspace) -> _SymMHS:
    proj = la.quotient_map(a_q)
    k = m.dim - a_q.dim
    w = WeightFiltration.of(k, {n: la.apply_to_subspace(proj, s)
                                for n, s in m.W.steps})
    proj_s = _sym_mat(la.to_qi_mat(proj))
    return _SymMHS(k, w, tuple((q, proj_s * g) for q, g in m.fgens))


def _sym_eval(term, m: _SymMHS) -> _SymMHS:
    if term == SELF:
        return m
    head = term[0]
    if head == "DUAL":
        return _sym_dual(_sym_eval(term[1], m))
    if head == "TENSOR":
        return _sym_tensor(_sym_eval(term[1], m), _sym_eval(term[2], m))
    if head == "HOM":
        return _sym_tensor(_sym_dual(_sym_eval(term[1], m)),
                           _sym_eval(term[2], m))
    if head == "WSUB":
        return _sym_wsub(_sym_eval(term[2], m), term[1])
    if head == "QUOT":
        inner = _sym_eval(term[2], m)
        return _sym_quot(inner, _quot_subspace(term[1], inner.dim))
    raise ParseError(f"unknown construction head {head!r}")


# -- the locus computation ----------------------------------------------------

def _is_hodge_at(pencil: Pencil, v, construction, t: GaussRat) -> bool:
    d = eval_construction(construction, pencil_member(pencil, t))
    vq = tuple(Fraction(x) for x in v)
    if not d.W.at(0).contains(vq):
        return False
    return d.F.at(0).contains(tuple(GaussRat(x) for x in vq))


def locus_on_pencil(pencil: Pencil, v: Sequence, construction) -> LocusResult:
    """Hodge locus of a rational vector along the pencil.

    Returns linear constraints on the parameter; ALL means the vector is
    a Hodge class at every member.  The symbolic computation runs over
    the generic fiber and is cross-validated by exact evaluation at the
    candidate solutions and at control points.
    """
    probs = pencil.problems()
    if probs:
        raise NotAnMhsError(probs)
    _check_term(construction)
    sym = _sym_eval(construction, _sym_member(pencil))
    vq = tuple(Fraction(x) for x in v)
    if len(vq) != sym.dim:
        raise LocusError("vector does not live in the derived space")
    if not sym.W.at(0).contains(vq):
        return LocusResult("AFFINE_SUBSET",
                           ((GaussRat(0), GaussRat(0), GaussRat(1)),),
                           outside_w0=True)
    if not any(vq):
        return LocusResult("ALL", ())
    g = sym.fgen_at(0)
    vs = sp.Matrix([[_sym(GaussRat(x))] for x in vq])
    left_null = _sym_nullspace(g.T)
    constraints: List[Tuple[GaussRat, GaussRat, GaussRat]] = []
    for j in range(left_null.cols):
        poly = sp.expand((left_null.col(j).T * vs)[0])
        poly = sp.fraction(sp.cancel(poly))[0]
        p = sp.Poly(poly, _T)
        if p.degree() > 1:
            raise LocusError("locus constraints are not linear in the parameter")
        if p.degree() <= 0:
            if poly != 0:
                constraints.append((GaussRat(0), GaussRat(0), _gauss(poly)))
            continue
        constraints.append((_gauss(p.nth(1)), GaussRat(0), _gauss(p.nth(0))))
    result = (LocusResult("ALL", ()) if not constraints
              else LocusResult("AFFINE_SUBSET", tuple(constraints)))
    _cross_validate(pencil, v, construction, result)
    return result


def _cross_validate(pencil: Pencil, v, construction, result: LocusResult) -> None:
    if result.is_all:
        for t in (GaussRat(0), GaussRat(1), GaussRat(0, 1)):
            if not _is_hodge_at(pencil, v, construction, t):
                raise LocusError("generic-fiber computation disagrees with "
                                 "exact evaluation on an ALL locus")
        return
    sol = result.solution()
    if sol is not None:
        ok = all(a * sol + c == 0 for a, _, c in result.constraints)
        if ok != _is_hodge_at(pencil, v, construction, sol):
            raise LocusError("generic-fiber computation disagrees with "
                             "exact evaluation at the candidate point")
        off = sol + 1
        if _is_hodge_at(pencil, v, construction, off) and \
                any(a * off + c != 0 for a, _, c in result.constraints):
            raise LocusError("exact evaluation found a point the symbolic "
                             "locus misses")


# -- family probes ------------------------------------------------------------

def global_hodge_subspace_probe(mu: Triple, a_q: Subspace, construction,
                                samples: Sequence[SPoint]):
    """Check whether a_q underlies a subobject at every sampled member.

    Returns ("GLOBAL_ON_SAMPLES", None) or ("FAILS_AT", sample).
    """
    _check_term(construction)
    for s in samples:
        d = eval_construction(construction, tr.mhs_of_spoint(s))
        try:
            mh.sub_mhs(d, a_q)
        except NotASubobjectError:
            return ("FAILS_AT", s)
    return ("GLOBAL_ON_SAMPLES", None)


def quotient_at_point(s: SPoint, a_q: Subspace,
                      construction) -> MixedHodgeStructure:
    """The quotient of the derived structure at one sample by a subobject."""
    _check_term(construction)
    d = eval_construction(construction, tr.mhs_of_spoint(s))
    return mh.quotient_mhs(d, a_q)
