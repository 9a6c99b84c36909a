"""Extension classes, splitting tests, and the unipotent radical.

For a structure M and a weight cut p, the extension of the quotient by
the subobject is measured by a class in Hom(M/W_pM, W_pM) tensored with
Q(i), well defined modulo F^0 and rational vectors.  The smallest
subobject modulo which that class splits is computed exactly when every
graded piece is a one-dimensional Tate object with pairwise-distinct
weight gaps; outside that regime only the checker is offered.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from . import loci as lo
from . import mhs as mh
from . import serialize as se
from . import triples as tr
from .errors import (DegenerateRangeError, MhsError, RegimeError,
                     ResourceGuardError)
from .field import Q, QI, GaussRat, as_scalar
from .linalg import Matrix, Subspace
from .mhs import MixedHodgeStructure
from .triples import Triple

GUARD_ENV = "MHSLAB_TENSOR_GUARD"
DEFAULT_GUARD = 10 ** 4


def _kron_mat(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    bn = len(b)
    bm = len(b[0]) if bn else 0
    for ra in a:
        for rb in b:
            rows.append(tuple(x * y for x in ra for y in rb))
    if not rows:
        return ()
    return tuple(rows)


# -- the dagger construction --------------------------------------------------

@dataclass(frozen=True)
class HomDagger:
    """Maps M/W_pM -> M whose projection back down is a scalar.

    Coordinates: the first r = dim Hom(M/W_pM, W_pM) coordinates are the
    kernel of lambda (in hom coordinates of that small space); the last
    coordinate is the coefficient of a fixed rational section, so lambda
    is simply the last coordinate.
    """

    mhs: MixedHodgeStructure
    lam: Tuple[Fraction, ...]     # rational functional, = last coordinate
    inclusion: Matrix             # over Q: small hom coords -> dagger coords

    @property
    def r(self) -> int:
        return self.mhs.dim - 1


def _cut(m: MixedHodgeStructure, p: int):
    wp = m.W.at(p)
    if wp.is_zero() or wp.is_full():
        raise DegenerateRangeError(
            f"weight cut {p} leaves nothing on one side")
    sub = mh.sub_mhs(m, wp)
    quo = mh.quotient_mhs(m, wp)
    return wp, sub, quo


def hom_dagger(m: MixedHodgeStructure, p: int) -> HomDagger:
    wp, sub, quo = _cut(m, p)
    k, w = quo.dim, wp.dim
    big = mh.hom(quo, m)
    incl = la.inclusion_map(wp)           # m.dim x w
    proj = la.quotient_map(wp)            # k x m.dim
    # Basis of the dagger space: the kernel block, then one section.
    kernel_emb = _kron_mat(la.identity(Q, k), incl)  # k*m.dim x k*w
    f0 = la.solve_matrix(Q, proj, la.identity(Q, k))  # rational section
    dagger_rows = list(la.transpose(kernel_emb)) + [mh.hom_vec(f0, k, m.dim)]
    basis = la.mat(Q, dagger_rows)        # (r+1) x k*m.dim, rows = coords
    span = Subspace.span(Q, k * m.dim, dagger_rows)
    w_steps = {n: la.express_in_basis(Q, basis,
                                      la.intersect(s, span).basis)
               for n, s in big.W.steps}
    basis_qi = la.to_qi_mat(basis)
    span_qi = span.to_qi()
    f_steps = {q: la.express_in_basis(QI, basis_qi,
                                      la.intersect(s, span_qi).basis)
               for q, s in big.F.steps}
    r = k * w
    dag = mh.make_mhs(
        r + 1,
        {n: Subspace.span(Q, r + 1, rows) for n, rows in w_steps.items()},
        {q: Subspace.span(QI, r + 1, rows) for q, rows in f_steps.items()})
    mh.check_valid(dag)
    lam = tuple(Fraction(1) if i == r else Fraction(0) for i in range(r + 1))
    inclusion = la.mat(Q, [[1 if i == j else 0 for j in range(r)]
                           for i in range(r + 1)])
    return HomDagger(dag, lam, inclusion)


# -- extension classes --------------------------------------------------------

@dataclass(frozen=True)
class ExtClassRep:
    """e = f_rational - f_hodge, in small hom coordinates over Q(i)."""

    e: Tuple[GaussRat, ...]
    f_rational: Tuple
    f_hodge: Tuple


def _f0_section_solutions(m: MixedHodgeStructure, p: int):
    """Particular + homogeneous solutions of: vec in F^0 Hom(M/W_p, M),
    projection of the map is the identity."""
    wp, sub, quo = _cut(m, p)
    k = quo.dim
    big = mh.hom(quo, m)
    proj = la.quotient_map(wp)
    gens = la.transpose(big.F.at(0).basis)       # columns over QI
    # Projection condition on a combination sum c_j * gen_j.
    rows = []
    rhs = []
    idk = la.identity(QI, k)
    ncols = big.F.at(0).dim
    proj_qi = la.to_qi_mat(proj)
    for i in range(k):
        for j in range(k):
            row = []
            for c in range(ncols):
                a = mh.hom_mat(tuple(gens[t][c] for t in range(k * m.dim)),
                               k, m.dim)
                row.append(la.mat_mul(proj_qi, a)[j][i])
            rows.append(tuple(row))
            rhs.append(idk[j][i])
    sys = tuple(rows)
    part = la.solve(QI, sys, tuple(rhs))
    if part is None:
        raise MhsError("no Hodge-filtration section exists; "
                       "the input is not a valid structure")
    hom_kernel = la.kernel(QI, sys, ncols)
    return gens, part, hom_kernel


def ext_class_rep(m: MixedHodgeStructure, p: int,
                  rng: Optional[random.Random] = None) -> ExtClassRep:
    """A representative of the extension class at the weight cut p.

    With an rng, both sections are shifted by random admissible vectors;
    the class modulo F^0 + rational is unchanged.
    """
    wp, sub, quo = _cut(m, p)
    k, w = quo.dim, wp.dim
    proj = la.quotient_map(wp)
    incl = la.inclusion_map(wp)
    f0 = la.solve_matrix(Q, proj, la.identity(Q, k))
    if rng is not None:
        noise = la.mat(Q, [[Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                            for _ in range(k)] for _ in range(w)])
        f0 = la.mat_add(f0, la.mat_mul(incl, noise))
    f_rational = tuple(GaussRat(x) for x in mh.hom_vec(f0, k, m.dim))
    gens, part, hom_kernel = _f0_section_solutions(m, p)
    coeffs = list(part)
    if rng is not None and hom_kernel.dim:
        for kv in hom_kernel.basis:
            c = GaussRat(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                         Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
            coeffs = [x + c * y for x, y in zip(coeffs, kv)]
    f_hodge = tuple(sum((c * gens[t][j] for j, c in enumerate(coeffs)),
                        GaussRat(0)) for t in range(k * m.dim))
    diff = tuple(x - y for x, y in zip(f_rational, f_hodge))
    # Pull the difference back to Hom(M/W_p, W_p) coordinates.
    a = mh.hom_mat(diff, k, m.dim)
    b = la.solve_matrix(QI, la.to_qi_mat(incl), a)
    if b is None:
        raise MhsError("extension difference does not land in the subobject")
    e = tuple(mh.hom_vec(b, k, w))
    return ExtClassRep(e, f_rational, f_hodge)


def _in_mixed_span(e: Sequence, qi_gens: Sequence, q_gens: Sequence) -> bool:
    """Decide e in span_{Q(i)}(qi_gens) + span_Q(q_gens) exactly.

    Restricting Q(i)-scalars to Q doubles the generators; real and
    imaginary coordinates are split and the membership becomes a plain
    rational solvability question.
    """
    def realify(v):
        vals = [as_scalar(QI, x) for x in v]
        return tuple(x.re for x in vals) + tuple(x.im for x in vals)
    cols = []
    for g in qi_gens:
        cols.append(realify(g))
        cols.append(realify(tuple(GaussRat(0, 1) * as_scalar(QI, x)
                                  for x in g)))
    for g in q_gens:
        cols.append(realify(g))
    target = realify(e)
    if not cols:
        return all(x == 0 for x in target)
    return la.solve(Q, la.transpose(la.mat(Q, cols)), target) is not None


def splits_mod(m: MixedHodgeStructure, p: int, a_q: Subspace,
               rep: Optional[ExtClassRep] = None) -> bool:
    """Whether the extension class at p dies modulo the subobject a_q.

    a_q must underlie a subobject of Hom(M/W_pM, W_pM); the test decides
    membership of the class in a_q (x) Q(i) + F^0 + rational vectors.
    """
    wp, sub, quo = _cut(m, p)
    h = mh.hom(quo, sub)
    mh.sub_mhs(h, a_q)  # raises NotASubobjectError when not a subobject
    if rep is None:
        rep = ext_class_rep(m, p)
    qi_gens = [tuple(GaussRat(x) for x in row) for row in a_q.basis]
    qi_gens += list(h.F.at(0).basis)
    q_gens = [tuple(Fraction(1) if j == i else Fraction(0)
                    for j in range(h.dim)) for i in range(h.dim)]
    return _in_mixed_span(rep.e, qi_gens, q_gens)


def total_ext_class_rep(m: MixedHodgeStructure) -> Tuple[GaussRat, ...]:
    """The sum of all per-cut classes, pushed into End coordinates."""
    if len(m.W.jumps) < 2:
        raise DegenerateRangeError("structure has a single weight")
    total = tuple(GaussRat(0) for _ in range(m.dim * m.dim))
    for p in m.W.jumps[:-1]:
        wp = m.W.at(p)
        quo_dim = m.dim - wp.dim
        rep = ext_class_rep(m, p)
        b = mh.hom_mat(rep.e, quo_dim, wp.dim)
        end = la.mat_mul(la.to_qi_mat(la.inclusion_map(wp)),
                         la.mat_mul(b, la.to_qi_mat(la.quotient_map(wp))))
        total = tuple(x + y for x, y in
                      zip(total, mh.hom_vec(end, m.dim, m.dim)))
    return total


def total_splits_mod(m: MixedHodgeStructure, a_q: Subspace) -> bool:
    """Splitting test for the total class, inside W_{-1}End coordinates."""
    end = mh.hom(m, m)
    w_m1 = end.W.at(-1)
    if not w_m1.contains_subspace(a_q):
        raise MhsError("candidate is not inside the weight -1 part of End")
    mh.sub_mhs(end, a_q)
    e = total_ext_class_rep(m)
    qi_gens = [tuple(GaussRat(x) for x in row) for row in a_q.basis]
    qi_gens += list(la.intersect(end.F.at(0), w_m1.to_qi()).basis)
    q_gens = list(w_m1.basis)
    return _in_mixed_span(e, qi_gens, q_gens)


# -- the rank-one Tate regime -------------------------------------------------

@dataclass(frozen=True)
class UpResult:
    subspace: Subspace  # over Q, inside Hom(M/W_pM, W_pM)
    regime: str         # "TATE_EXACT"
    large: bool


def _regime_weights(w: mh.WeightFiltration) -> List[int]:
    """The weights of a rank-one graded-Tate object with distinct gaps."""
    pieces = mh.graded_pieces(w)
    if any(piece.dim != 1 for piece in pieces):
        raise RegimeError("graded pieces must all be one-dimensional "
                          "(checker only: use splits_mod with candidates)")
    weights = [piece.weight for piece in pieces]
    if any(n % 2 for n in weights):
        raise RegimeError("one-dimensional pieces of odd weight are not "
                          "Tate objects")
    gaps = [b - a for a, b in combinations(weights, 2)]
    if len(set(gaps)) != len(gaps):
        raise RegimeError("weight gaps must be pairwise distinct "
                          "(checker only: use splits_mod with candidates)")
    return weights


def u_p_tate(m: MixedHodgeStructure, p: int) -> UpResult:
    """The exact unipotent-radical block at the weight cut p.

    The subobjects of H = Hom(M/W_pM, W_pM) inject into subsets of its
    rank-one graded blocks (weights are pairwise distinct), each subset
    lifting uniquely if at all; the result is the smallest liftable
    subobject modulo which the extension class splits.
    """
    _regime_weights(m.W)
    wp, sub, quo = _cut(m, p)
    h = mh.hom(quo, sub)
    rep = ext_class_rep(m, p)
    pieces = mh.graded_pieces(h.W)
    r = h.dim
    best: Optional[Subspace] = None
    for size in range(r + 1):
        for subset in combinations(range(len(pieces)), size):
            rows = []
            for idx in subset:
                piece = pieces[idx]
                emb = mh.graded_embedding(piece, r)
                rows.extend(la.transpose(emb))
            a_tilde = Subspace.span(Q, r, rows)
            a_q = lo.can_lift(h, a_tilde)
            if a_q is None:
                continue
            if splits_mod(m, p, a_q, rep):
                best = a_q
                break
        if best is not None:
            break
    assert best is not None  # the full space always lifts and splits
    return UpResult(best, "TATE_EXACT", best.is_full())


def u_large_detail(m: MixedHodgeStructure) -> List[Tuple[int, UpResult]]:
    """u_p at every weight cut, lowest weight first."""
    _regime_weights(m.W)
    return [(p, u_p_tate(m, p)) for p in m.W.jumps[:-1]]


def is_u_large(m: MixedHodgeStructure) -> bool:
    return all(res.large for _, res in u_large_detail(m))


# -- bounded-degree Lie-algebra upper bound -----------------------------------

def _guard_limit() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_GUARD
    try:
        return int(raw)
    except ValueError:
        raise ResourceGuardError(f"{GUARD_ENV} must be an integer, got {raw!r}")


def _derivation_action(x: Matrix, signs: Sequence[int], dim: int) -> Matrix:
    """Sum over factors of 1 x .. x (x or -x^T) x .. x 1."""
    n = len(signs)
    total = la.zeros(Q, dim ** n, dim ** n)
    for k, sign in enumerate(signs):
        factor = x if sign > 0 else la.mat_scale(Fraction(-1), la.transpose(x))
        term = la.identity(Q, 1)
        for j in range(n):
            term = _kron_mat(term, factor if j == k else la.identity(Q, dim))
        total = la.mat_add(total, term)
    return total


def mt_lie_upper_bound(m: MixedHodgeStructure, d: int) -> Subspace:
    """Endomorphisms annihilating all weight-zero Hodge classes in tensor
    powers of degree at most d (primal and dual slots mixed).

    An upper bound for the Lie algebra acting on the structure: shrinks
    as d grows, and is closed under the commutator bracket.
    """
    if d < 1:
        raise MhsError("tensor degree must be at least 1")
    limit = _guard_limit()
    n = m.dim
    if n == 0:
        return Subspace.zero(Q, 0)
    md = mh.dual(m)
    constraint_rows: List[Tuple] = []
    # Ordered to match hom coordinates: slot i*n+j is the (j, i) entry.
    basis_maps = [mh.hom_mat(tuple(1 if t == s else 0
                                   for t in range(n * n)), n, n)
                  for s in range(n * n)]
    for deg in range(1, d + 1):
        if n ** deg > limit:
            raise ResourceGuardError(
                f"tensor space of dimension {n ** deg} exceeds the "
                f"ceiling {limit} (set {GUARD_ENV} to raise it)")
        for a in range(deg + 1):
            b = deg - a
            t = None
            signs = [1] * a + [-1] * b
            for _ in range(a):
                t = m if t is None else mh.tensor(t, m)
            for _ in range(b):
                t = md if t is None else mh.tensor(t, md)
            classes = mh.hodge_classes(t)
            if classes.is_zero():
                continue
            actions = [_derivation_action(x, signs, n) for x in basis_maps]
            for v in classes.basis:
                for row_idx in range(n ** deg):
                    constraint_rows.append(tuple(
                        la.mat_vec(act, v)[row_idx] for act in actions))
    if not constraint_rows:
        return Subspace.full(Q, n * n)
    return la.kernel(Q, la.mat(Q, constraint_rows), n * n)


def end_subspace_is_bracket_closed(s: Subspace, n: int) -> bool:
    """Whether a subspace of End (in hom coordinates) is a Lie subalgebra."""
    mats = [mh.hom_mat(row, n, n) for row in s.basis]
    for x in mats:
        for y in mats:
            bracket = la.mat_add(la.mat_mul(x, y),
                                 la.mat_scale(Fraction(-1), la.mat_mul(y, x)))
            if not s.contains(mh.hom_vec(bracket, n, n)):
                return False
    return True


# -- the genericity experiment ------------------------------------------------

def genericity_experiment(mu: Triple, n_samples: int, seed,
                          height: int) -> dict:
    """Sample the family and measure how often the radical is large.

    Adds three all-rational control points, which are expected to be
    degenerate; the report is a plain JSON-ready dictionary and is a
    pure function of (mu, n_samples, seed, height).
    """
    tr.check_triple(mu)
    _regime_weights(mu.W)
    cuts = mu.W.jumps[:-1]
    n_large_per_p = {p: 0 for p in cuts}
    all_large = 0
    for i in range(n_samples):
        alpha = tr.sample_point(mu, f"{seed}:{i}", height)
        m = tr.build_mhs(mu, alpha)
        detail = u_large_detail(m)
        for p, res in detail:
            if res.large:
                n_large_per_p[p] += 1
        if all(res.large for _, res in detail):
            all_large += 1
    degenerate = []
    for j in range(3):
        alpha = tr.sample_rational_point(mu, f"{seed}:deg:{j}", height)
        m = tr.build_mhs(mu, alpha)
        detail = u_large_detail(m)
        degenerate.append({
            "params": se.tpoint_to_json(alpha)["sections"],
            "u_p_dims": {str(p): res.subspace.dim for p, res in detail},
            "failing_p": [p for p, res in detail if not res.large],
        })
    return {
        "triple": se.triple_to_json(mu),
        "seed": str(seed),
        "height": height,
        "n_samples": n_samples,
        "per_p": [{"p": p, "n_large": n_large_per_p[p]} for p in cuts],
        "all_large_count": all_large,
        "degenerate": degenerate,
    }
