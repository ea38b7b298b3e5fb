"""Cartan matrices, root systems, weights and tensor multiplicities.

Conventions used throughout the package:

* the Cartan matrix entry is a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i),
  so a weight mu is stored by its values mu(h_j) = <mu, alpha_j-check>,
  and a root with simple-root coordinates c has weight coordinates A c;
* the symmetrizers d_i are the unique coprime positive integers with
  d_i a_ij symmetric, normalized so that (alpha_i, alpha_i) = 2 d_i.

Weights are plain int tuples in the h-coordinates above.  All bilinear-form
values are Fractions; multiplicities are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .linalg import frac_inverse


class InvalidType(ValueError):
    """Unknown series letter or rank out of range for the series."""


class NonDominant(ValueError):
    """A dominant integral weight was required."""


@dataclass(frozen=True)
class CartanDatum:
    series: str
    rank: int
    cartan: tuple  # tuple of tuple of int, cartan[i][j] = a_ij
    d: tuple       # symmetrizers, one per node

    def __str__(self):
        return f"{self.series}{self.rank}"


def build_cartan(series: str, rank: int) -> CartanDatum:
    """Cartan datum for the finite series A-G (Bourbaki node numbering)."""
    series = series.upper()
    if rank < 1:
        raise InvalidType(f"rank must be positive, got {rank}")
    n = rank

    def chain(last_edge=None):
        a = [[2 * (i == j) for j in range(n)] for i in range(n)]
        for i in range(n - 1):
            a[i][i + 1] = -1
            a[i + 1][i] = -1
        if last_edge:
            a[n - 2][n - 1], a[n - 1][n - 2] = last_edge
        return a

    if series == "A":
        a = chain()
        d = [1] * n
    elif series == "B":
        if n < 2:
            raise InvalidType("B requires rank >= 2")
        # alpha_n short: a_{n-1,n} = -1, a_{n,n-1} = -2
        a = chain(last_edge=(-1, -2))
        d = [2] * (n - 1) + [1]
    elif series == "C":
        if n < 2:
            raise InvalidType("C requires rank >= 2")
        a = chain(last_edge=(-2, -1))
        d = [1] * (n - 1) + [2]
    elif series == "D":
        if n < 3:
            raise InvalidType("D requires rank >= 3")
        a = [[2 * (i == j) for j in range(n)] for i in range(n)]
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        d = [1] * n
    elif series == "E":
        if n not in (6, 7, 8):
            raise InvalidType("E requires rank in {6, 7, 8}")
        # Bourbaki: node 2 attaches to node 4 of the chain 1-3-4-5-...
        chain_nodes = [1, 3, 4, 5, 6, 7, 8][: n - 1]
        a = [[2 * (i == j) for j in range(n)] for i in range(n)]
        pairs = [(chain_nodes[k], chain_nodes[k + 1]) for k in range(len(chain_nodes) - 1)]
        pairs.append((2, 4))
        for i, j in pairs:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        d = [1] * n
    elif series == "F":
        if n != 4:
            raise InvalidType("F requires rank 4")
        a = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
        d = [2, 2, 1, 1]
    elif series == "G":
        if n != 2:
            raise InvalidType("G requires rank 2")
        a = [[2, -3], [-1, 2]]
        d = [1, 3]
    else:
        raise InvalidType(f"unknown series {series!r}")

    # sanity: d_i a_ij symmetric with coprime positive d_i
    assert all(d[i] * a[i][j] == d[j] * a[j][i] for i in range(n) for j in range(n))
    assert gcd(*d) == 1 if n > 1 else d[0] == 1
    return CartanDatum(series, n, tuple(tuple(row) for row in a), tuple(d))


@dataclass(frozen=True)
class RootSystem:
    cd: CartanDatum
    positive_roots: tuple   # tuple of (simple_coords, weight_coords) pairs
    highest_root: tuple     # weight coordinates of theta
    rho: tuple              # weight with rho(h_i) = 1

    @property
    def rank(self):
        return self.cd.rank

    def all_roots(self):
        for c, w in self.positive_roots:
            yield c, w
        for c, w in self.positive_roots:
            yield tuple(-x for x in c), tuple(-x for x in w)


def weight_of_root_coords(cd: CartanDatum, coords) -> tuple:
    """h-coordinates of sum_i coords[i] alpha_i: (A c)_j with A the Cartan matrix."""
    n = cd.rank
    return tuple(sum(cd.cartan[j][i] * coords[i] for i in range(n)) for j in range(n))


@lru_cache(maxsize=None)
def root_system(cd: CartanDatum) -> RootSystem:
    """Positive roots by closure along root strings, sorted by (height, coords)."""
    n = cd.rank
    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = {c: weight_of_root_coords(cd, c) for c in simples}
    current = list(simples)
    while current:
        nxt = []
        for c in current:
            w = roots[c]
            for i in range(n):
                # p = how far the alpha_i-string extends below c
                p = 0
                down = list(c)
                while True:
                    down[i] -= 1
                    t = tuple(down)
                    if min(t) < 0 or t not in roots:
                        break
                    p += 1
                # string length: q = p - <c, alpha_i-check>
                qlen = p - w[i]
                if qlen > 0:
                    up = list(c)
                    up[i] += 1
                    t = tuple(up)
                    if t not in roots:
                        roots[t] = weight_of_root_coords(cd, t)
                        nxt.append(t)
        current = nxt
    ordered = sorted(roots, key=lambda c: (sum(c), c))
    positive = tuple((c, roots[c]) for c in ordered)
    theta = positive[-1][1]
    assert sum(positive[-1][0]) == max(sum(c) for c, _ in positive)
    rho = tuple(1 for _ in range(n))
    return RootSystem(cd, positive, theta, rho)


def positive_roots(cd: CartanDatum):
    return root_system(cd).positive_roots


def highest_root(cd: CartanDatum) -> tuple:
    return root_system(cd).highest_root


@lru_cache(maxsize=None)
def _weight_gram(cd: CartanDatum):
    """Gram matrix of the fundamental weights: (omega_i, omega_j) = (A^-T D)_ij."""
    n = cd.rank
    a = [[Fraction(cd.cartan[i][j]) for j in range(n)] for i in range(n)]
    ainv = frac_inverse(a)
    g = [[ainv[j][i] * cd.d[j] for j in range(n)] for i in range(n)]
    assert all(g[i][j] == g[j][i] for i in range(n) for j in range(n))
    return tuple(tuple(row) for row in g)


def bilinear(cd: CartanDatum, lam, mu) -> Fraction:
    """Invariant form on weights (h-coordinates), with (alpha_i, alpha_i) = 2 d_i."""
    g = _weight_gram(cd)
    n = cd.rank
    return sum(g[i][j] * lam[i] * mu[j] for i in range(n) for j in range(n))


def is_dominant(lam) -> bool:
    return all(x >= 0 for x in lam)


def _check_dominant(lam):
    if not is_dominant(lam) or not all(isinstance(x, int) for x in lam):
        raise NonDominant(f"not a dominant integral weight: {lam}")


def weyl_dim(cd: CartanDatum, lam) -> int:
    """Weyl dimension formula, exact."""
    _check_dominant(lam)
    rs = root_system(cd)
    rho = rs.rho
    num = Fraction(1)
    den = Fraction(1)
    lam_rho = tuple(a + b for a, b in zip(lam, rho))
    for _, w in rs.positive_roots:
        num *= bilinear(cd, lam_rho, w)
        den *= bilinear(cd, rho, w)
    dim = num / den
    assert dim.denominator == 1 and dim > 0
    return int(dim)


@lru_cache(maxsize=None)
def weight_multiplicities(cd: CartanDatum, lam: tuple):
    """All weights of the irreducible module with highest weight lam, by
    Freudenthal's recursion.  Returns dict {weight: multiplicity}."""
    _check_dominant(lam)
    rs = root_system(cd)
    n = cd.rank
    rho = rs.rho
    lam_rho = tuple(a + b for a, b in zip(lam, rho))
    c_top = bilinear(cd, lam_rho, lam_rho)
    mult = {lam: 1}
    level = [lam]
    pos = [(c, w) for c, w in rs.positive_roots]
    simple_weights = [w for c, w in rs.positive_roots if sum(c) == 1]
    while level:
        nxt = set()
        for mu in level:
            for alpha in simple_weights:
                nxt.add(tuple(a - b for a, b in zip(mu, alpha)))
        nxt -= set(mult)
        new_level = []
        for mu in sorted(nxt):
            mu_rho = tuple(a + b for a, b in zip(mu, rho))
            denom = c_top - bilinear(cd, mu_rho, mu_rho)
            if denom == 0:
                continue  # cannot be a weight: strict inequality holds below lam
            # exact k-range: mu + k alpha must stay under lam in the root order
            delta = _root_coords(cd, tuple(a - b for a, b in zip(lam, mu)))
            acc = Fraction(0)
            for coords, alpha in pos:
                kmax = min(int(delta[i] // coords[i]) for i in range(n) if coords[i])
                for k in range(1, kmax + 1):
                    nu = tuple(a + k * b for a, b in zip(mu, alpha))
                    m = mult.get(nu, 0)
                    if m:
                        acc += m * bilinear(cd, nu, alpha)
            m_mu = 2 * acc / denom
            assert m_mu.denominator == 1 and m_mu >= 0
            if m_mu:
                mult[mu] = int(m_mu)
                new_level.append(mu)
        level = new_level
    total = sum(mult.values())
    assert total == weyl_dim(cd, lam), (lam, total)
    return dict(mult)


def tensor_multiplicity(cd: CartanDatum, mu, nu, lam) -> int:
    """Multiplicity of V(lam) inside V(mu) (x) V(nu).

    Weight-multiplicity convolution of the two factors followed by iterated
    highest-weight extraction; pure integer/Fraction arithmetic throughout,
    so this doubles as the oracle for highest-weight space dimensions.
    """
    _check_dominant(lam)
    decomp = tensor_decompose(cd, tuple(mu), tuple(nu))
    return decomp.get(tuple(lam), 0)


@lru_cache(maxsize=None)
def tensor_decompose(cd: CartanDatum, mu: tuple, nu: tuple):
    """Full decomposition {lam: multiplicity} of V(mu) (x) V(nu)."""
    _check_dominant(mu)
    _check_dominant(nu)
    wm1 = weight_multiplicities(cd, mu)
    wm2 = weight_multiplicities(cd, nu)
    prod = {}
    for w1, m1 in wm1.items():
        for w2, m2 in wm2.items():
            w = tuple(a + b for a, b in zip(w1, w2))
            prod[w] = prod.get(w, 0) + m1 * m2
    top = tuple(a + b for a, b in zip(mu, nu))
    rs = root_system(cd)

    def depth(w):
        # number of simple roots subtracted from mu+nu; integral for any
        # weight appearing in the product
        diff = tuple(a - b for a, b in zip(top, w))
        coords = _root_coords(cd, diff)
        assert all(x.denominator == 1 and x >= 0 for x in coords), w
        return int(sum(coords))

    out = {}
    remaining = {w: m for w, m in prod.items() if m}
    while remaining:
        cands = [w for w in remaining if is_dominant(w)]
        assert cands, "nonnegativity of the remaining character failed"
        w0 = min(cands, key=lambda w: (depth(w), w))
        mult = remaining[w0]
        assert mult > 0
        out[w0] = mult
        for w, m in weight_multiplicities(cd, w0).items():
            left = remaining.get(w, 0) - mult * m
            assert left >= 0, (w0, w)
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
    assert sum(m * weyl_dim(cd, w) for w, m in out.items()) == weyl_dim(cd, mu) * weyl_dim(cd, nu)
    return out


@lru_cache(maxsize=None)
def _cartan_inverse(cd: CartanDatum):
    n = cd.rank
    a = [[Fraction(cd.cartan[i][j]) for j in range(n)] for i in range(n)]
    return frac_inverse(a)


def _root_coords(cd: CartanDatum, w):
    """Simple-root coordinates of a weight given in h-coordinates."""
    ainv = _cartan_inverse(cd)
    n = cd.rank
    return tuple(sum(ainv[i][j] * w[j] for j in range(n)) for i in range(n))


def cartan_to_json(cd: CartanDatum) -> dict:
    return {"series": cd.series, "rank": cd.rank}


def cartan_from_json(d: dict) -> CartanDatum:
    return build_cartan(d["series"], int(d["rank"]))
