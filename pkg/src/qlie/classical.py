"""Independent classical (v = 1) cross-check pipeline.

Everything here is computed over plain rationals with the classical
formulas -- lowering/raising operators with integer weight eigenvalues,
the undeformed coproduct x -> x (x) 1 + 1 (x) x, the classical
contravariant form -- and never touches the deformed ring.  The quantum
pipeline specialized at v = 1 must agree with these tables exactly; the
tests enforce that equality entry by entry.

Also provides the standard sl_n structure constants in the
{X_ij} u {H_k} basis (X_ij ~ e_ij, H_k = e_kk - e_{k+1,k+1}) and the
split Casimir operator used as the classical-limit oracle for the
monodromy matrix.
"""

from __future__ import annotations

from fractions import Fraction

from .rootdata import CartanDatum, highest_root, weyl_dim
from .linalg import frac_rref, frac_solve, frac_inverse, frac_nullspace


class ClassicalModule:
    """Mirror of the deformed module data with plain Fraction entries."""

    def __init__(self, cd, highest_weight, labels, weights, E, F, gram, weight_basis):
        self.cd = cd
        self.highest_weight = highest_weight
        self.labels = labels
        self.weights = weights
        self.E = E
        self.F = F
        self.gram = gram
        self.weight_basis = weight_basis

    @property
    def dim(self):
        return len(self.labels)


def build_classical_module(cd: CartanDatum, lam, budget_dim: int = 64) -> ClassicalModule:
    """Classical irreducible module with the same level-by-level algorithm
    (and therefore the same labels and pivot choices) as the deformed build."""
    lam = tuple(lam)
    if weyl_dim(cd, lam) > budget_dim:
        raise RuntimeError("dimension budget exceeded")
    n = cd.rank
    simple_w = [tuple(cd.cartan[k][j] for k in range(n)) for j in range(n)]

    labels = [()]
    weights = [lam]
    weight_basis = {lam: [0]}
    gram = {lam: [[Fraction(1)]]}
    E = {i: {} for i in range(n)}
    F = {i: {} for i in range(n)}

    prev_level = {lam: [0]}
    while prev_level:
        targets = {}
        for mu_up, idxs in prev_level.items():
            for j in range(n):
                mu = tuple(a - b for a, b in zip(mu_up, simple_w[j]))
                targets.setdefault(mu, []).extend((j, b) for b in idxs)
        new_level = {}
        for mu in sorted(targets):
            cands = sorted(targets[mu])
            eact = [dict() for _ in cands]
            for ci, (j, b) in enumerate(cands):
                for i in range(n):
                    vec = {}
                    for (d, bb), coeff in E[i].items():
                        if bb != b:
                            continue
                        for (dd, dsrc), f in F[j].items():
                            if dsrc == d:
                                vec[dd] = vec.get(dd, Fraction(0)) + coeff * f
                    if i == j and weights[b][i]:
                        vec[b] = vec.get(b, Fraction(0)) + Fraction(weights[b][i])
                    eact[ci][i] = {d: x for d, x in vec.items() if x}
            m = len(cands)
            pair = [[Fraction(0)] * m for _ in range(m)]
            for col, (j, b) in enumerate(cands):
                for row, (i, a) in enumerate(cands):
                    up = tuple(x + y for x, y in zip(mu, simple_w[i]))
                    block = weight_basis.get(up)
                    if not block:
                        continue
                    g = gram[up]
                    la = block.index(a)
                    acc = Fraction(0)
                    for d, coeff in eact[col][i].items():
                        acc += coeff * g[la][block.index(d)]
                    pair[row][col] = acc
            pivots = frac_rref([list(r) for r in pair])
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
            for col, gi in new_idx.items():
                for i in range(n):
                    for d, coeff in eact[col][i].items():
                        E[i][(d, gi)] = coeff
            gblock = gram[mu]
            for col, (j, b) in enumerate(cands):
                if col in new_idx:
                    F[j][(new_idx[col], b)] = Fraction(1)
                    continue
                rhs = [pair[p][col] for p in pivots]
                if all(x == 0 for x in rhs):
                    continue
                coords = frac_solve([list(r) for r in gblock], rhs)
                for p, x in enumerate(coords):
                    if x:
                        F[j][(idxs[p], b)] = x
            new_level[mu] = idxs
        prev_level = new_level

    return ClassicalModule(cd, lam, labels, weights, E, F, gram, weight_basis)


def _tensor_ops(V: ClassicalModule):
    """x -> x (x) 1 + 1 (x) x matrices over product indices a*dim+b."""
    d = V.dim
    n = V.cd.rank
    dE, dF = {}, {}
    for i in range(n):
        me, mf = {}, {}
        for (r, c), x in V.E[i].items():
            for b in range(d):
                me[(r * d + b, c * d + b)] = me.get((r * d + b, c * d + b), Fraction(0)) + x
            for a in range(d):
                me[(a * d + r, a * d + c)] = me.get((a * d + r, a * d + c), Fraction(0)) + x
        for (r, c), x in V.F[i].items():
            for b in range(d):
                mf[(r * d + b, c * d + b)] = mf.get((r * d + b, c * d + b), Fraction(0)) + x
            for a in range(d):
                mf[(a * d + r, a * d + c)] = mf.get((a * d + r, a * d + c), Fraction(0)) + x
        dE[i] = {k: v for k, v in me.items() if v}
        dF[i] = {k: v for k, v in mf.items() if v}
    return dE, dF


def _sp_vec(m, vec, dim=None):
    out = {}
    for (r, c), x in m.items():
        if c in vec:
            out[r] = out.get(r, Fraction(0)) + x * vec[c]
    return {k: v for k, v in out.items() if v}


def classical_bracket(cd: CartanDatum, budget_dim: int = 64):
    """Classical structure constants on the adjoint module basis, obtained by
    the same route as the deformed pipeline: highest-weight vector at the
    highest root inside V (x) V, antisymmetrized, lowered, and inverted
    against the complement.  Returns (module, constants {(a,b,c): Fraction}).
    """
    V = build_classical_module(cd, highest_root(cd), budget_dim)
    d = V.dim
    n = cd.rank
    dE, dF = _tensor_ops(V)
    theta = tuple(highest_root(cd))

    weights2 = {}
    for a in range(d):
        for b in range(d):
            w = tuple(x + y for x, y in zip(V.weights[a], V.weights[b]))
            weights2.setdefault(w, []).append(a * d + b)
    block = weights2[theta]
    rows = []
    for i in range(n):
        up = tuple(theta[k] + cd.cartan[k][i] for k in range(n))
        for q in weights2.get(up, ()):
            row = [dE[i].get((q, p), Fraction(0)) for p in block]
            if any(row):
                rows.append(row)
    kern = frac_nullspace(rows, len(block))
    assert kern, "no classical highest-weight vector at the highest root"

    def swap_vec(vec):
        return {(p % d) * d + p // d: x for p, x in vec.items()}

    candidates = [dict(zip(block, k)) for k in kern]
    for i in range(len(kern)):
        for j in range(i + 1, len(kern)):
            candidates.append({p: kern[i][bi] + kern[j][bi] for bi, p in enumerate(block)})

    anti = sym = None
    for cand in candidates:
        cand = {p: x for p, x in cand.items() if x}
        sw = swap_vec(cand)
        a = {p: (cand.get(p, Fraction(0)) - sw.get(p, Fraction(0))) / 2 for p in set(cand) | set(sw)}
        a = {p: x for p, x in a.items() if x}
        s = {p: (cand.get(p, Fraction(0)) + sw.get(p, Fraction(0))) / 2 for p in set(cand) | set(sw)}
        s = {p: x for p, x in s.items() if x}
        if anti is None and a:
            anti = a
        if sym is None and s:
            sym = s
    assert anti is not None, "classically zero antisymmetrization"
    scale = None
    for p in sorted(anti):
        if anti[p]:
            scale = 1 / anti[p]
            break
    anti = {p: x * scale for p, x in anti.items()}

    us = [anti]
    if len(kern) > 1:
        assert sym is not None
        us.append(sym)

    index = {lab: a for a, lab in enumerate(V.labels)}
    tables = []
    for u in us:
        table = [None] * d
        table[0] = dict(u)
        for a in range(1, d):
            lab = V.labels[a]
            table[a] = _sp_vec(dF[lab[0]], table[index[lab[1:]]])
        tables.append(table)

    def pair_form(u, w):
        acc = Fraction(0)
        for p, x in u.items():
            a, b = divmod(p, d)
            wa, wb = V.weights[a], V.weights[b]
            ba, bb = V.weight_basis[wa], V.weight_basis[wb]
            ga, gb = V.gram[wa], V.gram[wb]
            for q, y in w.items():
                c, e = divmod(q, d)
                if V.weights[c] != wa or V.weights[e] != wb:
                    continue
                acc += x * ga[ba.index(a)][ba.index(c)] * gb[bb.index(b)][bb.index(e)] * y
        return acc

    m = len(us)
    P = [[pair_form(us[j], us[k]) for k in range(m)] for j in range(m)]
    x = frac_solve(P, [Fraction(1)] + [Fraction(0)] * (m - 1))

    bmat = {}
    for k in range(m):
        if not x[k]:
            continue
        # adjoint of the embedding: S_V^{-1} beta^T S_(x), per weight block
        for w, vw in V.weight_basis.items():
            pw = weights2.get(w)
            if not pw:
                continue
            rows_k = []
            for a1 in vw:
                col = tables[k][a1]
                row = []
                for p in pw:
                    b, c = divmod(p, d)
                    wb, wc = V.weights[b], V.weights[c]
                    bb, bc = V.weight_basis[wb], V.weight_basis[wc]
                    gb, gc = V.gram[wb], V.gram[wc]
                    acc = Fraction(0)
                    for p1, val in col.items():
                        b1, c1 = divmod(p1, d)
                        if V.weights[b1] != wb or V.weights[c1] != wc:
                            continue
                        acc += val * gb[bb.index(b1)][bb.index(b)] * gc[bc.index(c1)][bc.index(c)]
                    row.append(acc)
                rows_k.append(row)
            if not any(any(r) for r in rows_k):
                continue
            ginv = frac_inverse([list(r) for r in V.gram[w]])
            for li, a in enumerate(vw):
                for pj, p in enumerate(pw):
                    acc = Fraction(0)
                    for kk in range(len(vw)):
                        acc += ginv[li][kk] * rows_k[kk][pj]
                    if acc:
                        key = (a, p)
                        bmat[key] = bmat.get(key, Fraction(0)) + x[k] * acc
    bmat = {k: v for k, v in bmat.items() if v}

    # re-verify: B o beta = id, B o beta_sym = 0, intertwining with e_i, f_i
    for a in range(d):
        for c in range(d):
            acc = Fraction(0)
            for p, val in tables[0][a].items():
                acc += bmat.get((c, p), Fraction(0)) * val
            assert acc == (1 if a == c else 0), "classical B o beta != id"
    if m > 1:
        for a in range(d):
            for c in range(d):
                acc = Fraction(0)
                for p, val in tables[1][a].items():
                    acc += bmat.get((c, p), Fraction(0)) * val
                assert acc == 0, "classical B nonzero on the complement"
    for i in range(n):
        for mats, dmats in ((V.E, dE), (V.F, dF)):
            lhs = {}
            for (r, c), xx in mats[i].items():
                for (cc, p), y in bmat.items():
                    if cc == c:
                        lhs[(r, p)] = lhs.get((r, p), Fraction(0)) + xx * y
            rhs = {}
            for (c, p), y in bmat.items():
                for (pp, p2), xx in dmats[i].items():
                    if pp == p:
                        rhs[(c, p2)] = rhs.get((c, p2), Fraction(0)) + y * xx
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = {k: v for k, v in rhs.items() if v}
            assert lhs == rhs, "classical intertwining fails"

    constants = {}
    for (c, p), val in bmat.items():
        a, b = divmod(p, d)
        constants[(a, b, c)] = val
    return V, constants


def classical_sln_table(n: int):
    """Standard sl_n structure constants in the basis
    {X_ij : i != j, lexicographic} u {H_1..H_{n-1}} with X_ij ~ e_ij and
    H_k ~ e_kk - e_{k+1,k+1}.  Returns (labels, constants {(a,b,c): Fraction}).
    """
    xlabels = [("X", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    labels = xlabels + [("H", k) for k in range(1, n)]
    pos = {lab: a for a, lab in enumerate(labels)}

    def cartan_coords(i, j):
        # e_ii - e_jj as a combination of H_k
        out = {}
        lo, hi, sgn = (i, j, 1) if i < j else (j, i, -1)
        for k in range(lo, hi):
            out[k] = Fraction(sgn)
        return out

    constants = {}

    def add(a, b, c, val):
        if val:
            constants[(a, b, c)] = constants.get((a, b, c), Fraction(0)) + val

    for (_, i, j) in xlabels:
        a = pos[("X", i, j)]
        for (_, k, l) in xlabels:
            b = pos[("X", k, l)]
            # [e_ij, e_kl] = d_jk e_il - d_li e_kj
            if j == k and i != l:
                add(a, b, pos[("X", i, l)], Fraction(1))
            if l == i and k != j:
                add(a, b, pos[("X", k, j)], Fraction(-1))
            if j == k and i == l:
                for hk, val in cartan_coords(i, j).items():
                    add(a, b, pos[("H", hk)], val)
        for k in range(1, n):
            hidx = pos[("H", k)]
            alpha = Fraction((1 if k == i else 0) - (1 if k == i - 1 else 0)
                             - (1 if k == j else 0) + (1 if k == j - 1 else 0))
            if alpha:
                add(hidx, a, a, alpha)    # [H_k, X_ij]
                add(a, hidx, a, -alpha)   # [X_ij, H_k]
    constants = {k: v for k, v in constants.items() if v}
    return labels, constants


def classical_split_casimir_a1(V: ClassicalModule, W: ClassicalModule) -> dict:
    """2 * (e (x) f + f (x) e + (1/2) h (x) h) on V (x) W over product indices
    a * dim(W) + b, for the rank-one algebra."""
    dw = W.dim
    e1, f1 = V.E[0], V.F[0]
    e2, f2 = W.E[0], W.F[0]
    h1 = {(a, a): Fraction(V.weights[a][0]) for a in range(V.dim) if V.weights[a][0]}
    h2 = {(b, b): Fraction(W.weights[b][0]) for b in range(W.dim) if W.weights[b][0]}
    out = {}

    def tensor_add(m1, m2, coeff):
        for (r1, c1), x in m1.items():
            for (r2, c2), y in m2.items():
                key = (r1 * dw + r2, c1 * dw + c2)
                out[key] = out.get(key, Fraction(0)) + coeff * x * y

    tensor_add(e1, f2, Fraction(2))
    tensor_add(f1, e2, Fraction(2))
    tensor_add(h1, h2, Fraction(1))
    return {k: v for k, v in out.items() if v}
