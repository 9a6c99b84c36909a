"""Seeded generators for random valid structures used across the tests."""

import functools
import random
from fractions import Fraction

from mhslab import linalg as la
from mhslab import mhs as mh
from mhslab import triples as tr
from mhslab.field import Q, QI, GaussRat
from mhslab.linalg import Subspace


def random_invertible(rng: random.Random, n: int):
    """A random invertible integer matrix (unit upper x unit lower)."""
    upper = [[1 if i == j else (rng.randint(-3, 3) if j > i else 0)
              for j in range(n)] for i in range(n)]
    lower = [[1 if i == j else (rng.randint(-3, 3) if j < i else 0)
              for j in range(n)] for i in range(n)]
    return la.mat_mul(la.mat(Q, upper), la.mat(Q, lower))


def random_pure_piece(rng: random.Random, weight: int):
    """A pure structure of the given weight, dimension 1 or 2.

    Dimension 1 forces a Tate object (so odd weights are always dim 2);
    dimension 2 carries Hodge types (p, n-p) and (n-p, p) with p > n/2.
    """
    n = weight
    if n % 2 == 0 and rng.random() < 0.5:
        return mh.make_mhs(1, {n: Subspace.full(Q, 1)},
                           {n // 2: Subspace.full(QI, 1)})
    p = n // 2 + 1 + rng.randint(0, 1)  # strictly above n/2
    u = (1, 0)
    v = (rng.randint(-3, 3), rng.choice([1, -1]))
    line = tuple(GaussRat(a, b) for a, b in zip(u, v))
    return mh.make_mhs(2, {n: Subspace.full(Q, 2)},
                       {n - p: Subspace.full(QI, 2),
                        p: Subspace.span(QI, 2, [line])})


@functools.lru_cache(maxsize=None)
def random_triple(seed, max_dim: int = 6) -> tr.Triple:
    """A random triple with a non-coordinate weight flag, dim <= max_dim."""
    rng = random.Random(f"triple:{seed}")
    pieces = []
    total = 0
    weights = sorted(rng.sample(range(-4, 3), rng.randint(1, 3)))
    for w in weights:
        g = random_pure_piece(rng, w)
        if total + g.dim > max_dim:
            break
        pieces.append((w, g))
        total += g.dim
    if not pieces:
        pieces = [(0, mh.tate_twist(0))]
        total = 1
    s = random_invertible(rng, total)
    steps = {}
    k = 0
    for w, g in pieces:
        k += g.dim
        steps[w] = Subspace.span(Q, total, s[:k])
    mu = tr.Triple(total, mh.WeightFiltration.of(total, steps), ())
    # Transport each pure piece into the flag's graded coordinates.
    graded = []
    for piece, (w, g) in zip(mh.graded_pieces(mu.W), pieces):
        graded.append((w, g))
        assert piece.dim == g.dim
    mu = tr.Triple(total, mu.W, tuple(graded))
    tr.check_triple(mu)
    return mu


@functools.lru_cache(maxsize=None)
def random_mhs(seed, max_dim: int = 6, height: int = 5) -> mh.MixedHodgeStructure:
    """A random valid structure: a random triple at a random sampled point."""
    mu = random_triple(seed, max_dim)
    alpha = tr.sample_point(mu, f"mhs:{seed}", height)
    return tr.build_mhs(mu, alpha)
