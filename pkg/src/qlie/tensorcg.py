"""Tensor square of a module, highest-weight vectors, and inverse
Clebsch-Gordan coefficients.

The coproduct convention (fixed globally, same as the module convention)
is Delta(E_i) = E_i (x) K_i^-1 + K_i (x) E_i and the F analog, with
K_i = represented q_i^(h_i/2).  Product basis vectors are indexed
row-major: (a, b) -> a*dim + b, which is also the lexicographic order
used for deterministic normalizations.

The structure constants of the quantum Lie algebra are produced by
invert_cg: given the embedding beta built from a highest-weight vector
of weight theta inside V (x) V, the bracket B is the unique module map
V (x) V -> V with B o beta = id that kills the submodules generated by
the remaining theta-highest-weight vectors.  It is computed from adjoints
of the embeddings with respect to the contravariant forms, which keeps
the linear algebra on the (at most two-dimensional) multiplicity space;
all defining properties are re-verified exactly afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qring import LaurentPoly, RatFunc, RF_ONE, RF_ZERO
from .rootdata import root_system, tensor_multiplicity, is_dominant
from .repbuild import IrrepModule
from .linalg import rf_nullspace, rf_solve, rf_inverse, sp_matvec, sp_matmul, sp_eq, sp_add_to


class EmptySpace(ValueError):
    """No highest-weight vector at the requested weight."""


class ClassicallyZero(ValueError):
    """Antisymmetrization produced a vector that vanishes at v = 1."""


class SingularSystem(ZeroDivisionError):
    """Highest-weight Gram system is singular (multiplicity miscount)."""


def _vpow(k: int) -> RatFunc:
    return RatFunc(LaurentPoly.v_power(k))


@dataclass
class TensorSquare:
    """V (x) V with the coproduct action.

    Matrices dE[i], dF[i] are sparse over the product index p = a*dim(V)+b;
    kexp[i][p] is the exponent of v in the diagonal Delta(K_i) entry.
    """

    base: IrrepModule
    dE: dict
    dF: dict
    kexp: dict
    weights: list
    weight_blocks: dict

    @property
    def dim(self):
        return self.base.dim ** 2

    def pair(self, a: int, b: int) -> int:
        return a * self.base.dim + b

    def unpair(self, p: int):
        return divmod(p, self.base.dim)


def tensor_square(V: IrrepModule) -> TensorSquare:
    d = V.dim
    n = V.cd.rank
    weights = [None] * (d * d)
    blocks = {}
    for a in range(d):
        wa = V.weights[a]
        for b in range(d):
            w = tuple(x + y for x, y in zip(wa, V.weights[b]))
            p = a * d + b
            weights[p] = w
            blocks.setdefault(w, []).append(p)
    dE, dF, kexp = {}, {}, {}
    for i in range(n):
        ke = V.kexp[i]
        me, mf = {}, {}
        for (r, c), x in V.E[i].items():
            for b in range(d):
                sp_add_to(me, r * d + b, c * d + b, x * _vpow(-ke[b]))
        for (r, c), x in V.E[i].items():
            for a in range(d):
                sp_add_to(me, a * d + r, a * d + c, _vpow(ke[a]) * x)
        for (r, c), x in V.F[i].items():
            for b in range(d):
                sp_add_to(mf, r * d + b, c * d + b, x * _vpow(-ke[b]))
        for (r, c), x in V.F[i].items():
            for a in range(d):
                sp_add_to(mf, a * d + r, a * d + c, _vpow(ke[a]) * x)
        dE[i] = me
        dF[i] = mf
        kexp[i] = [ke[a] + ke[b] for a in range(d) for b in range(d)]
    return TensorSquare(V, dE, dF, kexp, weights, blocks)


@dataclass
class HWSpace:
    """Joint kernel of the raising operators on one weight block."""

    weight: tuple
    basis: list      # sparse vectors {product_index: RatFunc}
    block: list      # product indices of the weight block


def highest_weight_space(T: TensorSquare, w) -> HWSpace:
    """Exact kernel of all Delta(E_i) on the weight-w block, with each basis
    vector denominator-cleared and rescaled by a rational so that its first
    coordinate with nonzero classical value equals 1 at v = 1."""
    w = tuple(w)
    cd = T.base.cd
    n = cd.rank
    block = T.weight_blocks.get(w)
    if not block:
        raise EmptySpace(f"weight {w} does not occur in the tensor square")
    rows = []
    for i in range(n):
        up = tuple(w[k] + cd.cartan[k][i] for k in range(n))
        for q in T.weight_blocks.get(up, ()):
            row = [T.dE[i].get((q, p), RF_ZERO) for p in block]
            if any(not x.is_zero() for x in row):
                rows.append(row)
    kern = rf_nullspace(rows, len(block))
    if not kern:
        raise EmptySpace(f"no highest-weight vector at weight {w}")
    basis = []
    for vec in kern:
        scale = None
        for x in vec:
            if not x.is_zero() and x.eval_at_one() != 0:
                scale = RatFunc(1) / RatFunc(x.eval_at_one())
                break
        assert scale is not None, "denominator-cleared kernel vector vanishes at v=1"
        basis.append({p: x * scale for p, x in zip(block, vec) if not x.is_zero()})
    if is_dominant(w):
        hw = T.base.highest_weight
        mult = tensor_multiplicity(cd, hw, hw, w)
        assert len(basis) == mult, (len(basis), mult)
    return HWSpace(w, basis, block)


def conjugate_transpose(T: TensorSquare, vec: dict) -> dict:
    """swap o qconjugate on a tensor vector (the map whose -1 eigenvectors
    give q-antisymmetric Clebsch-Gordan tables)."""
    d = T.base.dim
    out = {}
    for p, x in vec.items():
        a, b = divmod(p, d)
        out[b * d + a] = x.qconjugate()
    return out


def antisymmetrize_hw(T: TensorSquare, v0: dict) -> dict:
    """(1/2)(v0 - swap(qconjugate(v0))); raises ClassicallyZero if the
    result vanishes at v = 1."""
    tv = conjugate_transpose(T, v0)
    half = RatFunc(Fraction(1, 2))
    out = {}
    for p in set(v0) | set(tv):
        x = (v0.get(p, RF_ZERO) - tv.get(p, RF_ZERO)) * half
        if not x.is_zero():
            out[p] = x
    if all(x.eval_at_one() == 0 for x in out.values()):
        raise ClassicallyZero("antisymmetrized vector vanishes classically")
    return out


def symmetrize_hw(T: TensorSquare, v0: dict) -> dict:
    """(1/2)(v0 + swap(qconjugate(v0))); raises ClassicallyZero if the
    result vanishes at v = 1."""
    tv = conjugate_transpose(T, v0)
    half = RatFunc(Fraction(1, 2))
    out = {}
    for p in set(v0) | set(tv):
        x = (v0.get(p, RF_ZERO) + tv.get(p, RF_ZERO)) * half
        if not x.is_zero():
            out[p] = x
    if all(x.eval_at_one() == 0 for x in out.values()):
        raise ClassicallyZero("symmetrized vector vanishes classically")
    return out


@dataclass
class CGEmbedding:
    """Clebsch-Gordan coefficients K_a^{bc}: column a is the vector
    Delta(P_a) v0 where P_a is the lowering monomial of basis vector a."""

    tensor: TensorSquare
    table: list  # per module index a, sparse {product_index: RatFunc}

    def entry(self, a: int, b: int, c: int) -> RatFunc:
        return self.table[a].get(self.tensor.pair(b, c), RF_ZERO)

    def as_matrix(self) -> dict:
        out = {}
        for a, col in enumerate(self.table):
            for p, x in col.items():
                out[(p, a)] = x
        return out


def cg_embedding(T: TensorSquare, v0: dict) -> CGEmbedding:
    V = T.base
    index = {lab: a for a, lab in enumerate(V.labels)}
    table = [None] * V.dim
    table[0] = dict(v0)
    for a in range(1, V.dim):
        lab = V.labels[a]
        parent = index[lab[1:]]
        table[a] = sp_matvec(T.dF[lab[0]], table[parent])
    return CGEmbedding(T, table)


def verify_embedding(K: CGEmbedding) -> bool:
    """Exact intertwining check for all generators (E_i, F_i and the
    K_i weight bookkeeping)."""
    T = K.tensor
    V = T.base
    beta = K.as_matrix()
    for a, col in enumerate(K.table):
        wa = V.weights[a]
        if any(T.weights[p] != wa for p in col):
            return False
    for i in range(V.cd.rank):
        if not sp_eq(sp_matmul(T.dE[i], beta), sp_matmul(beta, V.E[i])):
            return False
        if not sp_eq(sp_matmul(T.dF[i], beta), sp_matmul(beta, V.F[i])):
            return False
    return True


def tensor_pair_form(V: IrrepModule, u: dict, w: dict) -> RatFunc:
    """Contravariant product form <a(x)b, c(x)d> = <a,c><b,d> on sparse
    tensor vectors."""
    d = V.dim
    acc = RF_ZERO
    for p, x in u.items():
        a, b = divmod(p, d)
        wa, wb = V.weights[a], V.weights[b]
        ba = V.weight_basis[wa]
        bb = V.weight_basis[wb]
        ga = V.gram[wa]
        gb = V.gram[wb]
        la = ba.index(a)
        lb = bb.index(b)
        for q, y in w.items():
            c, e = divmod(q, d)
            if V.weights[c] != wa or V.weights[e] != wb:
                continue
            acc = acc + x * ga[la][ba.index(c)] * gb[lb][bb.index(e)] * y
    return acc


def _adjoint_of_embedding(V: IrrepModule, T: TensorSquare, table: list) -> dict:
    """beta^dagger = S_V^{-1} beta^T S_(x), computed blockwise per weight.

    Returns a sparse matrix {(module_row, product_col): RatFunc}."""
    d = V.dim
    out = {}
    for w, vw in V.weight_basis.items():
        pw = T.weight_blocks.get(w)
        if not pw:
            continue
        # R[a', p] = sum_{p'} beta[p', a'] * S_(x)[p', p]
        rows = []
        for a1 in vw:
            col = table[a1]
            row = []
            for p in pw:
                b, c = divmod(p, d)
                wb, wc = V.weights[b], V.weights[c]
                bb, bc = V.weight_basis[wb], V.weight_basis[wc]
                gb, gc = V.gram[wb], V.gram[wc]
                lb, lc = bb.index(b), bc.index(c)
                acc = RF_ZERO
                for p1, x in col.items():
                    b1, c1 = divmod(p1, d)
                    if V.weights[b1] != wb or V.weights[c1] != wc:
                        continue
                    acc = acc + x * gb[bb.index(b1)][lb] * gc[bc.index(c1)][lc]
                row.append(acc)
            rows.append(row)
        if not any(not x.is_zero() for r in rows for x in r):
            continue
        ginv = rf_inverse([list(r) for r in V.gram[w]])
        for li, a in enumerate(vw):
            for pj, p in enumerate(pw):
                acc = RF_ZERO
                for k in range(len(vw)):
                    acc = acc + ginv[li][k] * rows[k][pj]
                if not acc.is_zero():
                    out[(a, p)] = acc
    return out


def bracket_matrix(dim: int, constants: dict) -> dict:
    """Sparse matrix of B on V (x) V from a constants table {(a,b,c): f}."""
    out = {}
    for (a, b, c), x in constants.items():
        if not x.is_zero():
            out[(c, a * dim + b)] = x
    return out


def invert_cg(V: IrrepModule, K: CGEmbedding, others: list) -> dict:
    """Structure constants f_ab^c of the unique module map B: V(x)V -> V
    with B o beta = id and B = 0 on the submodules generated by `others`.

    Every defining property (intertwining for all generators, the
    normalization K_a^{bc} f_bc^d = delta_a^d, and the vanishing
    conditions) is re-verified exactly before returning.
    """
    T = K.tensor
    us = [K.table[0]] + [dict(u) for u in others]
    m = len(us)
    embeds = [K] + [cg_embedding(T, u) for u in others]
    pair = [[tensor_pair_form(V, us[j], us[k]) for k in range(m)] for j in range(m)]
    rhs = [RF_ONE] + [RF_ZERO] * (m - 1)
    try:
        x = rf_solve(pair, rhs)
    except ZeroDivisionError as exc:
        raise SingularSystem(str(exc)) from exc
    bmat = {}
    for k in range(m):
        if x[k].is_zero():
            continue
        dag = _adjoint_of_embedding(V, T, embeds[k].table)
        for key, val in dag.items():
            sp_add_to(bmat, key[0], key[1], x[k] * val)

    # exact re-verification of the defining properties
    d = V.dim
    ident = {(a, a): RF_ONE for a in range(d)}
    assert sp_eq(sp_matmul(bmat, embeds[0].as_matrix()), ident), "B o beta != id"
    for k in range(1, m):
        assert not sp_matmul(bmat, embeds[k].as_matrix()), "B nonzero on a complement submodule"
    for i in range(V.cd.rank):
        assert sp_eq(sp_matmul(V.E[i], bmat), sp_matmul(bmat, T.dE[i])), "E intertwining fails"
        assert sp_eq(sp_matmul(V.F[i], bmat), sp_matmul(bmat, T.dF[i])), "F intertwining fails"
    for (c, p) in bmat:
        assert V.weights[c] == T.weights[p], "K intertwining (grading) fails"

    constants = {}
    for (c, p), val in bmat.items():
        a, b = divmod(p, d)
        constants[(a, b, c)] = val
    return constants
