"""Finite-dimensional highest-weight modules of the quantized enveloping algebra.

Generators and conventions (q_i = q^{d_i} = v^{2 d_i}):

    K_i = the represented q_i^{h_i / 2}, diagonal with entries v^{d_i mu(h_i)},
    [E_i, F_j] = delta_ij (K_i^2 - K_i^{-2}) / (q_i - q_i^{-1}),
    K_i E_j K_i^{-1} = v^{d_i a_ij} E_j,
    quantum Serre relations with Gaussian binomials in base q_i.

The module with highest weight lam is built level by level.  Vectors are
F-monomials applied to the highest-weight vector; below the top each weight
space is spanned by F_i images of the previous level, so the candidates at
depth k+1 are exactly (j, b) = F_j v_b over the depth-k basis.  Their Gram
matrix under the contravariant form <F_i x, y> = <x, E_i y> is computed from
the previous level's Gram and E-expansions, pivot columns are selected on the
v = 1 specialization (equality of classical and quantum ranks makes a
classically invertible minor generically invertible), and the chosen
monomials become basis vectors.  This makes every matrix entry regular at
v = 1 and the v = 1 specialization a classical module on the same labels.

All matrices are sparse dicts {(row, col): RatFunc} on global basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .qring import LaurentPoly, RatFunc, RF_ONE, RF_ZERO, q_int, q_binomial
from .rootdata import (
    CartanDatum,
    weight_multiplicities,
    weyl_dim,
    highest_root,
)
from .linalg import frac_rref, rf_solve, sp_matmul, sp_eq, sp_scale, sp_sub

DEFAULT_DIM_BUDGET = 64


class BudgetExceeded(RuntimeError):
    """Module dimension above the configured budget."""


class InternalInconsistency(RuntimeError):
    """Constructed module violates a structural accounting identity."""


@dataclass
class IrrepModule:
    """An irreducible highest-weight module with a fixed monomial basis.

    labels[a] is the F-monomial (i_1, ..., i_k) with v_a = F_{i_1} ... F_{i_k}
    applied to the highest-weight vector (0-based simple-root indices);
    weights[a] are h-coordinates; E[i], F[i] sparse matrices; kexp[i][a] the
    exponent of v in the diagonal K_i entry; gram maps a weight to the dense
    Gram block of the contravariant form on its basis indices.
    """

    cd: CartanDatum
    highest_weight: tuple
    labels: list
    weights: list
    E: dict
    F: dict
    kexp: dict
    gram: dict
    weight_basis: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.labels)

    def k_entry(self, i: int, a: int) -> RatFunc:
        return RatFunc(LaurentPoly.v_power(self.kexp[i][a]))

    def weight_block(self, mu) -> list:
        return self.weight_basis.get(tuple(mu), [])

    def gram_block(self, mu):
        return self.gram[tuple(mu)]

    def to_json(self) -> dict:
        from .rootdata import cartan_to_json

        def sp_json(m):
            return [[r, c, val.to_json()] for (r, c), val in sorted(m.items())]

        return {
            "cartan": cartan_to_json(self.cd),
            "highest_weight": list(self.highest_weight),
            "labels": [list(l) for l in self.labels],
            "weights": [list(w) for w in self.weights],
            "E": {str(i): sp_json(m) for i, m in self.E.items()},
            "F": {str(i): sp_json(m) for i, m in self.F.items()},
            "kexp": {str(i): list(v) for i, v in self.kexp.items()},
        }


def build_irrep(cd: CartanDatum, lam, budget_dim: int = DEFAULT_DIM_BUDGET) -> IrrepModule:
    """Construct the irreducible module with dominant highest weight lam."""
    lam = tuple(lam)
    dim = weyl_dim(cd, lam)
    if dim > budget_dim:
        raise BudgetExceeded(f"dim V({lam}) = {dim} exceeds budget {budget_dim}")
    n = cd.rank
    # alpha_j in h-coordinates is the j-th column of the Cartan matrix
    simple_w = [tuple(cd.cartan[k][j] for k in range(n)) for j in range(n)]

    labels = [()]
    weights = [lam]
    weight_basis = {lam: [0]}
    gram = {lam: [[RF_ONE]]}
    E = {i: {} for i in range(n)}
    F = {i: {} for i in range(n)}

    prev_level = {lam: [0]}  # weight -> basis indices at current depth
    while prev_level:
        # group candidate weights: mu = (weight at prev depth) - alpha_j
        targets = {}
        for mu_up, idxs in prev_level.items():
            for j in range(n):
                mu = tuple(a - b for a, b in zip(mu_up, simple_w[j]))
                targets.setdefault(mu, []).extend((j, b) for b in idxs)
        new_level = {}
        for mu in sorted(targets):
            cands = sorted(targets[mu])
            # E_i action of each candidate F_j v_b, expanded in the basis at mu + alpha_i
            eact = [dict() for _ in cands]
            for ci, (j, b) in enumerate(cands):
                for i in range(n):
                    up = tuple(a + b2 for a, b2 in zip(mu, simple_w[i]))
                    vec = {}
                    # F_j (E_i v_b): push the known E-column of b through F_j
                    for (d, bb), coeff in E[i].items():
                        if bb != b:
                            continue
                        for (dd, dsrc), f in F[j].items():
                            if dsrc == d:
                                vec[dd] = vec.get(dd, RF_ZERO) + coeff * f
                    if i == j:
                        mu_b = weights[b]
                        val = RatFunc(q_int(mu_b[i], cd.d[i]))
                        if not val.is_zero():
                            vec[b] = vec.get(b, RF_ZERO) + val
                    eact[ci][i] = {d: x for d, x in vec.items() if not x.is_zero()}
            # Gram matrix of candidates: <F_i v_a, F_j v_b> = <v_a, E_i F_j v_b>
            m = len(cands)
            pair = [[RF_ZERO] * m for _ in range(m)]
            for col, (j, b) in enumerate(cands):
                for row, (i, a) in enumerate(cands):
                    up = tuple(x + y for x, y in zip(mu, simple_w[i]))
                    block = weight_basis.get(up)
                    if not block:
                        continue
                    g = gram[up]
                    la = block.index(a)
                    acc = RF_ZERO
                    for d, coeff in eact[col][i].items():
                        acc = acc + coeff * g[la][block.index(d)]
                    pair[row][col] = acc
            # pivot columns on the classical specialization
            classical = [[x.eval_at_one() for x in row] for row in pair]
            pivots = frac_rref([list(r) for r in classical])
            if not pivots:
                continue
            base = len(labels)
            new_idx = {}
            for p, col in enumerate(pivots):
                j, b = cands[col]
                labels.append((j,) + labels[b])
                weights.append(mu)
                new_idx[col] = base + p
            idxs = list(range(base, base + len(pivots)))
            weight_basis[mu] = idxs
            gram[mu] = [[pair[r][c] for c in pivots] for r in pivots]
            # E-columns of the new basis vectors
            for col, gi in new_idx.items():
                for i in range(n):
                    for d, coeff in eact[col][i].items():
                        E[i][(d, gi)] = coeff
            # F-columns: expand every candidate in the new basis
            gblock = gram[mu]
            for col, (j, b) in enumerate(cands):
                if col in new_idx:
                    F[j][(new_idx[col], b)] = RF_ONE
                    continue
                rhs = [pair[p][col] for p in pivots]
                if all(x.is_zero() for x in rhs):
                    continue  # candidate is zero in the quotient
                coords = rf_solve(gblock, rhs)
                for p, x in enumerate(coords):
                    if not x.is_zero():
                        F[j][(idxs[p], b)] = x
            new_level[mu] = idxs
        prev_level = new_level

    kexp = {i: [cd.d[i] * w[i] for w in weights] for i in range(n)}
    mod = IrrepModule(cd, lam, labels, weights, E, F, kexp, gram, weight_basis)
    if mod.dim != dim:
        raise InternalInconsistency(f"built dim {mod.dim}, Weyl dim {dim}")
    return mod


def adjoint_module(cd: CartanDatum, budget_dim: int = DEFAULT_DIM_BUDGET) -> IrrepModule:
    """The module with highest weight the highest root."""
    return build_irrep(cd, highest_root(cd), budget_dim)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _k_diag_power(mod: IrrepModule, i: int, power: int):
    return {(a, a): RatFunc(LaurentPoly.v_power(power * mod.kexp[i][a])) for a in range(mod.dim)}


def verify_module(mod: IrrepModule) -> dict:
    """Exhaustive exact checks of the defining relations; returns a report
    {check_name: bool} and never raises on failure."""
    cd = mod.cd
    n = cd.rank
    report = {}

    # [E_i, F_j] = delta_ij (K_i^2 - K_i^-2)/(q_i - q_i^-1)
    ok = True
    for i in range(n):
        for j in range(n):
            lhs = sp_sub(sp_matmul(mod.E[i], mod.F[j]), sp_matmul(mod.F[j], mod.E[i]))
            rhs = {}
            if i == j:
                for a in range(mod.dim):
                    val = RatFunc(q_int(mod.weights[a][i], cd.d[i]))
                    if not val.is_zero():
                        rhs[(a, a)] = val
            if not sp_eq(lhs, rhs):
                ok = False
    report["commutator"] = ok

    # K_i E_j K_i^-1 = v^(d_i a_ij) E_j, and the F version with -a_ij
    ok = True
    for i in range(n):
        for j in range(n):
            ki = _k_diag_power(mod, i, 1)
            ki_inv = _k_diag_power(mod, i, -1)
            conj = sp_matmul(ki, sp_matmul(mod.E[j], ki_inv))
            scale = RatFunc(LaurentPoly.v_power(cd.d[i] * cd.cartan[i][j]))
            if not sp_eq(conj, sp_scale(mod.E[j], scale)):
                ok = False
            conj = sp_matmul(ki, sp_matmul(mod.F[j], ki_inv))
            scale = RatFunc(LaurentPoly.v_power(-cd.d[i] * cd.cartan[i][j]))
            if not sp_eq(conj, sp_scale(mod.F[j], scale)):
                ok = False
    report["k_conjugation"] = ok

    report["serre_e"] = _serre_ok(mod, mod.E)
    report["serre_f"] = _serre_ok(mod, mod.F)

    # weight multiset matches Freudenthal, dimension matches Weyl
    freud = weight_multiplicities(cd, mod.highest_weight)
    counts = {}
    for w in mod.weights:
        counts[w] = counts.get(w, 0) + 1
    report["weights_match_freudenthal"] = counts == freud
    report["dimension"] = mod.dim == weyl_dim(cd, mod.highest_weight)

    # regularity at v = 1 and classical specialization
    entries = [x for m in (*mod.E.values(), *mod.F.values()) for x in m.values()]
    regular = all(x.is_regular_at_one() for x in entries)
    report["regular_at_one"] = regular
    ok = regular
    if regular:
        for i in range(n):
            for j in range(n):
                e1 = {k: Fraction(x.eval_at_one()) for k, x in mod.E[i].items()}
                f1 = {k: Fraction(x.eval_at_one()) for k, x in mod.F[j].items()}
                lhs = _frac_sp_sub(_frac_sp_mul(e1, f1), _frac_sp_mul(f1, e1))
                rhs = {}
                if i == j:
                    for a in range(mod.dim):
                        if mod.weights[a][i]:
                            rhs[(a, a)] = Fraction(mod.weights[a][i])
                if lhs != rhs:
                    ok = False
    report["classical_commutator"] = ok

    # contravariant symmetry: S E_i = F_i^T S blockwise (S = Gram)
    ok = True
    for i in range(n):
        lhs = sp_matmul(_gram_sparse(mod), mod.E[i])
        rhs = sp_matmul(_sp_transpose(mod.F[i]), _gram_sparse(mod))
        if not sp_eq(lhs, rhs):
            ok = False
    report["contravariant_adjoint"] = ok

    report["all"] = all(report.values())
    return report


def _serre_ok(mod: IrrepModule, mats: dict) -> bool:
    cd = mod.cd
    n = cd.rank
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = 1 - cd.cartan[i][j]
            acc = {}
            for k in range(m + 1):
                coeff = RatFunc(q_binomial(m, k, cd.d[i]))
                if k % 2:
                    coeff = -coeff
                term = _sp_power(mats[i], k, mod.dim)
                term = sp_matmul(term, mats[j])
                term = sp_matmul(term, _sp_power(mats[i], m - k, mod.dim))
                for key, val in term.items():
                    cur = acc.get(key, RF_ZERO) + coeff * val
                    if cur.is_zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = cur
            if acc:
                return False
    return True


def _sp_power(m, k, dim):
    if k == 0:
        return {(a, a): RF_ONE for a in range(dim)}
    out = m
    for _ in range(k - 1):
        out = sp_matmul(out, m)
    return out


def _gram_sparse(mod: IrrepModule):
    out = {}
    for mu, idxs in mod.weight_basis.items():
        g = mod.gram[mu]
        for r, a in enumerate(idxs):
            for c, b in enumerate(idxs):
                if not g[r][c].is_zero():
                    out[(a, b)] = g[r][c]
    return out


def _sp_transpose(m):
    return {(c, r): v for (r, c), v in m.items()}


def _frac_sp_mul(a, b):
    b_by_row = {}
    for (r, c), x in b.items():
        b_by_row.setdefault(r, []).append((c, x))
    out = {}
    for (r, k), x in a.items():
        for c, y in b_by_row.get(k, ()):
            v = out.get((r, c), Fraction(0)) + x * y
            if v:
                out[(r, c)] = v
            else:
                out.pop((r, c), None)
    return out


def _frac_sp_sub(a, b):
    out = {k: v for k, v in a.items() if v}
    for k, v in b.items():
        s = out.get(k, Fraction(0)) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out
