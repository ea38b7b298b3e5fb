"""Quantum Lie algebra structures.

Two constructions produce a ``QuantumLieAlgebra`` (a basis with structure
constants over Q(v)):

* ``build_generic``: the module pipeline.  The adjoint module V is built,
  a highest-weight vector at the highest root is found inside V (x) V,
  antisymmetrized under swap-composed-with-bar, lowered to a full
  Clebsch-Gordan embedding, and inverted to a bracket V (x) V -> V that
  is the identity against the embedding and kills the complementary
  copies.  Structure constants are indexed by the module basis, relabeled
  X_alpha for root vectors and H_k for the zero-weight slots.

* ``build_sln_explicit``: the closed-form two-parameter family for sl_n
  in the basis {X_ij} u {H_k}.  All its constants are linear in (s, t).

``canonical_normalize`` rescales a bracket and rebases its Cartan so that
H_i = [X_{alpha_i}, X_{-alpha_i}] and [H_1, X_{alpha_1}] =
2 q^{d_1} X_{alpha_1}, the normalization in which the rank-one algebra
takes its standard deformed shape.  Check functions verify the gradation,
q-antisymmetry (bar-antisymmetry of the constants), the classical v = 1
limit against independently computed rational oracles, ad-invariance of
pipeline brackets, and the flip symmetry of the explicit family; the
comparison fitter matches a pipeline output to the explicit family by
solving for the parameters and the change of basis exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .qring import (
    LaurentPoly,
    RatFunc,
    RF_ONE,
    RF_ZERO,
    laurent_sqrt,
    _fraction_sqrt,
)
from .rootdata import CartanDatum, build_cartan, highest_root, cartan_to_json, cartan_from_json
from .repbuild import adjoint_module, DEFAULT_DIM_BUDGET
from .tensorcg import (
    tensor_square,
    highest_weight_space,
    antisymmetrize_hw,
    symmetrize_hw,
    cg_embedding,
    verify_embedding,
    invert_cg,
    bracket_matrix,
    ClassicallyZero,
)
from .linalg import rf_rref, rf_inverse, sp_matmul, sp_eq
from .classical import classical_bracket, classical_sln_table


class InvalidParams(ValueError):
    """Parameters outside the admissible family (e.g. s + t vanishing at v=1)."""


class GaugeObstruction(RuntimeError):
    """Normalization impossible: missing root vectors, singular Cartan
    rebase, or a required square root that does not exist in Q(v)."""


def _vpow(k: int) -> RatFunc:
    return RatFunc(LaurentPoly.v_power(k))


def _qpow(k: int) -> RatFunc:
    return _vpow(2 * k)


@dataclass(frozen=True)
class BasisLabel:
    kind: str                 # "X" or "H"
    root: tuple = None        # h-coordinates of the root (X only)
    index: int = None         # 1-based Cartan slot (H only)
    ij: tuple = None          # matrix-unit position, explicit family only

    def name(self) -> str:
        if self.kind == "H":
            return f"H_{self.index}"
        if self.ij is not None:
            i, j = self.ij
            if i > 9 or j > 9:
                return "X_{%d,%d}" % (i, j)
            return "X_{%d%d}" % (i, j)
        return "X_{(%s)}" % ",".join(str(c) for c in self.root)

    def to_json(self) -> dict:
        if self.kind == "H":
            return {"label": "H", "index": self.index}
        out = {"label": "X", "root": list(self.root)}
        if self.ij is not None:
            out["ij"] = list(self.ij)
        return out

    @staticmethod
    def from_json(d: dict) -> "BasisLabel":
        if d["label"] == "H":
            return BasisLabel("H", index=int(d["index"]))
        ij = tuple(d["ij"]) if "ij" in d else None
        return BasisLabel("X", root=tuple(int(x) for x in d["root"]), ij=ij)


@dataclass
class QuantumLieAlgebra:
    cd: CartanDatum
    basis: list
    constants: dict           # {(a, b, c): RatFunc}, zero entries omitted
    provenance: str           # "generic-pipeline" or "explicit-sln"
    params: dict = None       # {"s": RatFunc, "t": RatFunc} for the explicit family
    normalized: bool = False
    checks: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.basis)

    def grade(self, a: int) -> tuple:
        lab = self.basis[a]
        if lab.kind == "X":
            return lab.root
        return (0,) * self.cd.rank

    def structure_constant(self, a: int, b: int, c: int) -> RatFunc:
        return self.constants.get((a, b, c), RF_ZERO)

    def x_indices(self):
        return [a for a, lab in enumerate(self.basis) if lab.kind == "X"]

    def h_indices(self):
        return [a for a, lab in enumerate(self.basis) if lab.kind == "H"]

    def root_index(self):
        return {lab.root: a for a, lab in enumerate(self.basis) if lab.kind == "X"}

    def to_json(self) -> dict:
        out = {
            "cartan": cartan_to_json(self.cd),
            "basis": [lab.to_json() for lab in self.basis],
            "constants": [
                {"a": a, "b": b, "c": c, "value": val.to_json()}
                for (a, b, c), val in sorted(self.constants.items())
                if not val.is_zero()
            ],
            "provenance": self.provenance,
            "normalized": self.normalized,
            "checks": self.checks,
        }
        if self.params is not None:
            out["params"] = {k: v.to_json() for k, v in self.params.items()}
        return out

    @staticmethod
    def from_json(d: dict) -> "QuantumLieAlgebra":
        cd = cartan_from_json(d["cartan"])
        basis = [BasisLabel.from_json(x) for x in d["basis"]]
        constants = {
            (e["a"], e["b"], e["c"]): RatFunc.from_json(e["value"])
            for e in d["constants"]
        }
        params = None
        if "params" in d:
            params = {k: RatFunc.from_json(v) for k, v in d["params"].items()}
        return QuantumLieAlgebra(
            cd,
            basis,
            constants,
            d["provenance"],
            params=params,
            normalized=bool(d.get("normalized", False)),
            checks=dict(d.get("checks", {})),
        )

    def format_text(self) -> str:
        lines = [f"# {self.cd.series}{self.cd.rank} {self.provenance}"
                 + (" normalized" if self.normalized else "")]
        names = [lab.name() for lab in self.basis]
        for (a, b, c), val in sorted(self.constants.items()):
            if val.is_zero():
                continue
            lines.append(f"f[{names[a]},{names[b]}]^{{{names[c]}}} = {val}")
        return "\n".join(lines) + "\n"


def equal_tables(x: dict, y: dict) -> bool:
    keys = set(x) | set(y)
    return all((x.get(k, RF_ZERO) - y.get(k, RF_ZERO)).is_zero() for k in keys)


def labeled_constants(A: QuantumLieAlgebra) -> dict:
    """Constants keyed by basis labels instead of positions, so tables on
    differently ordered bases can be compared: X vectors keyed by their
    root, H vectors by their Cartan index."""
    def key(a):
        lab = A.basis[a]
        return ("X", lab.root) if lab.kind == "X" else ("H", lab.index)

    out = {}
    for (a, b, c), val in A.constants.items():
        if not val.is_zero():
            out[(key(a), key(b), key(c))] = val
    return out


def same_algebra(A: QuantumLieAlgebra, B: QuantumLieAlgebra) -> bool:
    """Label-aware exact equality of two structure-constant tables."""
    x, y = labeled_constants(A), labeled_constants(B)
    keys = set(x) | set(y)
    return all((x.get(k, RF_ZERO) - y.get(k, RF_ZERO)).is_zero() for k in keys)


# ---------------------------------------------------------------------------
# explicit two-parameter sl_n family
# ---------------------------------------------------------------------------

def _sln_parts(n: int):
    """Labels and the s- and t-linear parts of the explicit sl_n constants.

    The full table at parameters (s, t) is  s * T_s + t * T_t.
    """
    xlabels = [("X", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    labels = xlabels + [("H", k) for k in range(1, n)]
    pos = {lab: a for a, lab in enumerate(labels)}
    Ts, Tt = {}, {}

    def add(table, key, val):
        if not val.is_zero():
            cur = table.get(key, RF_ZERO) + val
            if cur.is_zero():
                table.pop(key, None)
            else:
                table[key] = cur

    def l_parts(i, j, k):
        # l_ij(H_k) = (q^{1-k} d_{ki} - q^{-1-k} d_{k,i-1})(s + t q^n)
        #           - (q^{k-1} d_{kj} - q^{k+1} d_{k,j-1})(s + t q^{-n})
        first = RF_ZERO
        if k == i:
            first = first + _qpow(1 - k)
        if k == i - 1:
            first = first - _qpow(-1 - k)
        second = RF_ZERO
        if k == j:
            second = second + _qpow(k - 1)
        if k == j - 1:
            second = second - _qpow(k + 1)
        return first - second, first * _qpow(n) - second * _qpow(-n)

    for (_, i, j) in xlabels:
        a = pos[("X", i, j)]
        for k in range(1, n):
            h = pos[("H", k)]
            ls, lt = l_parts(i, j, k)
            add(Ts, (h, a, a), ls)
            add(Tt, (h, a, a), lt)
            # [X_ij, H_k] = -r_ij(H_k) X_ij with r_ij(H_k) = -l_ji(H_k)
            rs, rt = l_parts(j, i, k)
            add(Ts, (a, h, a), rs)
            add(Tt, (a, h, a), rt)

    for i in range(1, n):
        for j in range(1, n):
            a, b = pos[("H", i)], pos[("H", j)]
            for k in range(1, n):
                c = pos[("H", k)]
                fs = RF_ZERO
                ft = RF_ZERO
                if i == j:
                    if k == i:
                        fs = fs + _qpow(k + 1) - _qpow(-k - 1)
                        ft = ft + _qpow(n + 1 - i) - _qpow(-n - 1 + i)
                    if k < i:
                        fs = fs + (_qpow(1) + _qpow(-1)) * (_qpow(k) - _qpow(-k))
                    if k > i:
                        ft = ft + (_qpow(1) + _qpow(-1)) * (_qpow(n - k) - _qpow(-n + k))
                if i == j - 1:
                    if k <= i:
                        fs = fs + _qpow(-k) - _qpow(k)
                    if k > i:
                        ft = ft + _qpow(k - n) - _qpow(-k + n)
                if j == i - 1:
                    if k <= j:
                        fs = fs + _qpow(-k) - _qpow(k)
                    if k > j:
                        ft = ft + _qpow(k - n) - _qpow(-k + n)
                add(Ts, (a, b, c), fs)
                add(Tt, (a, b, c), ft)

    for (_, i, j) in xlabels:
        a = pos[("X", i, j)]
        b = pos[("X", j, i)]
        for k in range(1, n):
            c = pos[("H", k)]
            gs = RF_ZERO
            gt = RF_ZERO
            if k < j:
                gs = gs + _qpow(k)
            if k < i:
                gs = gs - _qpow(-k)
            if k >= i:
                gt = gt + _qpow(n - k)
            if k >= j:
                gt = gt - _qpow(k - n)
            add(Ts, (a, b, c), _qpow(i - j) * gs)
            add(Tt, (a, b, c), _qpow(i - j) * gt)

    for (_, i, j) in xlabels:
        a = pos[("X", i, j)]
        for (_, k, l) in xlabels:
            b = pos[("X", k, l)]
            if j == k and i != l:
                c = pos[("X", i, l)]
                add(Ts, (a, b, c), _vpow(1 - 2 * j))
                add(Tt, (a, b, c), _vpow(1 - 2 * j) * _qpow(n))
            if i == l and j != k:
                c = pos[("X", k, j)]
                add(Ts, (a, b, c), -_vpow(2 * i - 1))
                add(Tt, (a, b, c), -_vpow(2 * i - 1) * _qpow(-n))

    return labels, Ts, Tt


def _sln_root(n: int, i: int, j: int) -> tuple:
    """h-coordinates of the weight of X_ij (the root eps_i - eps_j)."""
    return tuple(
        (1 if k == i else 0) - (1 if k == i - 1 else 0)
        - (1 if k == j else 0) + (1 if k == j - 1 else 0)
        for k in range(1, n)
    )


def build_sln_explicit(n: int, s, t, check_params: bool = True) -> QuantumLieAlgebra:
    """The explicit two-parameter quantum Lie algebra structure for sl_n."""
    if n < 2:
        raise InvalidParams("n must be at least 2")
    s = s if isinstance(s, RatFunc) else RatFunc(s)
    t = t if isinstance(t, RatFunc) else RatFunc(t)
    if check_params:
        st = s + t
        if not st.is_regular_at_one() or st.eval_at_one() == 0:
            raise InvalidParams("s + t must be nonzero at v = 1")
    labels, Ts, Tt = _sln_parts(n)
    constants = {}
    for key in set(Ts) | set(Tt):
        val = s * Ts.get(key, RF_ZERO) + t * Tt.get(key, RF_ZERO)
        if not val.is_zero():
            constants[key] = val
    basis = []
    for lab in labels:
        if lab[0] == "X":
            _, i, j = lab
            basis.append(BasisLabel("X", root=_sln_root(n, i, j), ij=(i, j)))
        else:
            basis.append(BasisLabel("H", index=lab[1]))
    cd = build_cartan("A", n - 1)
    return QuantumLieAlgebra(cd, basis, constants, "explicit-sln",
                             params={"s": s, "t": t})


# ---------------------------------------------------------------------------
# generic module pipeline
# ---------------------------------------------------------------------------

@dataclass
class GenericPipeline:
    """All intermediate artifacts of the module construction."""

    module: object
    tensor: object
    hw_basis: list
    antisym: dict
    others: list
    embedding: object
    constants: dict


def _sp_sum(u: dict, w: dict) -> dict:
    out = dict(u)
    for p, x in w.items():
        cur = out.get(p, RF_ZERO) + x
        if cur.is_zero():
            out.pop(p, None)
        else:
            out[p] = cur
    return out


def generic_pipeline(cd: CartanDatum, budget_dim: int = DEFAULT_DIM_BUDGET) -> GenericPipeline:
    V = adjoint_module(cd, budget_dim)
    T = tensor_square(V)
    theta = highest_root(cd)
    hs = highest_weight_space(T, theta)
    if len(hs.basis) > 2:
        raise GaugeObstruction("highest-root multiplicity above 2 is not supported")
    candidates = list(hs.basis)
    for i in range(len(hs.basis)):
        for j in range(i + 1, len(hs.basis)):
            candidates.append(_sp_sum(hs.basis[i], hs.basis[j]))
    anti = None
    for cand in candidates:
        try:
            anti = antisymmetrize_hw(T, cand)
            break
        except ClassicallyZero:
            continue
    if anti is None:
        raise ClassicallyZero("no candidate with classically nonzero antisymmetrization")
    scale = None
    for p in sorted(anti):
        c1 = anti[p].eval_at_one()
        if c1 != 0:
            scale = RatFunc(1) / RatFunc(c1)
            break
    anti = {p: x * scale for p, x in anti.items()}
    others = []
    if len(hs.basis) > 1:
        sym = None
        for cand in candidates:
            try:
                sym = symmetrize_hw(T, cand)
                break
            except ClassicallyZero:
                continue
        assert sym is not None, "no classically nonzero symmetric complement"
        others.append(sym)
    K = cg_embedding(T, anti)
    assert verify_embedding(K), "Clebsch-Gordan embedding fails to intertwine"
    constants = invert_cg(V, K, others)
    return GenericPipeline(V, T, hs.basis, anti, others, K, constants)


def build_generic(cd: CartanDatum, budget_dim: int = DEFAULT_DIM_BUDGET,
                  pipe: GenericPipeline = None) -> QuantumLieAlgebra:
    """Quantum Lie algebra on the adjoint module via the tensor pipeline.
    A precomputed pipeline for the same Cartan datum may be passed in."""
    if pipe is None:
        pipe = generic_pipeline(cd, budget_dim)
    V = pipe.module
    zero = (0,) * cd.rank
    basis = []
    h_count = 0
    for a in range(V.dim):
        w = V.weights[a]
        if w == zero:
            h_count += 1
            basis.append(BasisLabel("H", index=h_count))
        else:
            basis.append(BasisLabel("X", root=w))
    return QuantumLieAlgebra(cd, basis, dict(pipe.constants), "generic-pipeline")


# ---------------------------------------------------------------------------
# canonical normalization
# ---------------------------------------------------------------------------

def _rf_sqrt(x: RatFunc):
    """Exact square root in Q(v) if one exists, else None."""
    root = laurent_sqrt(x.num * x.den)
    if root is None:
        return None
    return RatFunc(root, x.den)


def _scalar_zero(v) -> bool:
    return v == 0 if isinstance(v, Fraction) else v.is_zero()


def _normalize_table(constants, x_slots, h_slots, G, Ginv, m2, m):
    """Classwise rebase: bracket scaled by m, Cartan rebased
    H'_i = m sum_k G[i][k] H_k.  Works over RatFunc or Fraction entries.

    Only even powers of m (i.e. m2) enter except for root-root-to-root
    constants, which carry a single factor m.  Assumes the table is graded,
    so each class has outputs of one kind only.
    """
    n = len(h_slots)
    hpos = {h: k for k, h in enumerate(h_slots)}
    xset = set(x_slots)
    out = {}

    def add(key, val):
        if _scalar_zero(val):
            return
        cur = out.get(key)
        cur = val if cur is None else cur + val
        if _scalar_zero(cur):
            out.pop(key, None)
        else:
            out[key] = cur

    by_pair = {}
    for (a, b, c), val in constants.items():
        by_pair.setdefault((a, b), {})[c] = val

    for (a, b), col in by_pair.items():
        a_is_x = a in xset
        b_is_x = b in xset
        if a_is_x and b_is_x:
            for c, val in col.items():
                if c in xset:
                    if m is None:
                        raise GaugeObstruction(
                            "normalization needs a square root missing from Q(v)")
                    add((a, b, c), m * val)
                else:
                    k = hpos[c]
                    for j in range(n):
                        add((a, b, h_slots[j]), val * Ginv[k][j])
        elif not a_is_x and not b_is_x:
            i, j = hpos[a], hpos[b]
            for (a2, b2), col2 in by_pair.items():
                if a2 in xset or b2 in xset:
                    continue
                gi = G[i][hpos[a2]]
                gj = G[j][hpos[b2]]
                if _scalar_zero(gi) or _scalar_zero(gj):
                    continue
                for c, val in col2.items():
                    k = hpos[c]
                    for j2 in range(n):
                        add((a, b, h_slots[j2]), m2 * gi * gj * val * Ginv[k][j2])
        else:
            i = hpos[b] if a_is_x else hpos[a]
            for (a2, b2), col2 in by_pair.items():
                if a_is_x:
                    if a2 != a or b2 in xset:
                        continue
                    g = G[i][hpos[b2]]
                else:
                    if b2 != b or a2 in xset:
                        continue
                    g = G[i][hpos[a2]]
                if _scalar_zero(g):
                    continue
                for c, val in col2.items():
                    add((a, b, c), m2 * g * val)
    return out


def canonical_normalize(A: QuantumLieAlgebra) -> QuantumLieAlgebra:
    """Rescale the bracket and rebase the Cartan so that
    H_i = [X_{alpha_i}, X_{-alpha_i}] and [H_1, X_{alpha_1}] =
    2 q^{d_1} X_{alpha_1}.  Idempotent; raises GaugeObstruction when the
    basis lacks simple-root vectors, the rebase is singular, or the
    required square root does not exist in Q(v)."""
    cd = A.cd
    n = cd.rank
    if not check_gradation(A)["ok"]:
        raise GaugeObstruction("table is not graded")
    roots = A.root_index()
    h_slots = A.h_indices()
    x_slots = A.x_indices()
    if len(h_slots) != n:
        raise GaugeObstruction("Cartan slot count differs from the rank")
    simple = [tuple(cd.cartan[k][j] for k in range(n)) for j in range(n)]
    for alpha in simple:
        neg = tuple(-c for c in alpha)
        if alpha not in roots or neg not in roots:
            raise GaugeObstruction("missing simple-root vector X_alpha or X_-alpha")
    G = []
    for i in range(n):
        xi = roots[simple[i]]
        yi = roots[tuple(-c for c in simple[i])]
        G.append([A.structure_constant(xi, yi, h) for h in h_slots])
    x0 = roots[simple[0]]
    l0 = [A.structure_constant(h, x0, x0) for h in h_slots]
    gl = RF_ZERO
    for gk, lk in zip(G[0], l0):
        gl = gl + gk * lk
    if gl.is_zero():
        raise GaugeObstruction("degenerate pairing [X,X_-] against [H, X]")
    m2 = (_qpow(cd.d[0]) * RatFunc(2)) / gl   # 2 q^{d_1} / (g . l)
    try:
        Ginv = rf_inverse(G)
    except ZeroDivisionError as exc:
        raise GaugeObstruction("singular Cartan rebase") from exc
    xset = set(x_slots)
    needs_m = any(
        a in xset and b in xset and c in xset for (a, b, c) in A.constants
    )
    m = None
    if needs_m:
        m = _rf_sqrt(m2)
        # left None when no exact square root exists; _normalize_table raises
    new_constants = _normalize_table(A.constants, x_slots, h_slots, G, Ginv, m2, m)
    basis = []
    h_seen = 0
    for a, lab in enumerate(A.basis):
        if lab.kind == "H":
            h_seen += 1
            basis.append(BasisLabel("H", index=h_seen))
        else:
            basis.append(lab)
    return QuantumLieAlgebra(cd, basis, new_constants, A.provenance,
                             params=A.params, normalized=True)


def _classical_normalize(constants0, weights, cd):
    """The same classwise rebase applied to a classical (Fraction) table;
    used as the oracle for normalized algebras at v = 1."""
    n = cd.rank
    zero = (0,) * n
    h_slots = [a for a, w in enumerate(weights) if w == zero]
    x_slots = [a for a, w in enumerate(weights) if w != zero]
    roots = {weights[a]: a for a in x_slots}
    simple = [tuple(cd.cartan[k][j] for k in range(n)) for j in range(n)]
    G = []
    for i in range(n):
        xi = roots[simple[i]]
        yi = roots[tuple(-c for c in simple[i])]
        G.append([constants0.get((xi, yi, h), Fraction(0)) for h in h_slots])
    x0 = roots[simple[0]]
    l0 = [constants0.get((h, x0, x0), Fraction(0)) for h in h_slots]
    gl = sum((gk * lk for gk, lk in zip(G[0], l0)), Fraction(0))
    if gl == 0:
        raise GaugeObstruction("degenerate classical pairing")
    m2 = Fraction(2) / gl
    from .linalg import frac_inverse

    Ginv = frac_inverse([list(r) for r in G])
    needs_m = any(a in set(x_slots) and b in set(x_slots) and c in set(x_slots)
                  for (a, b, c) in constants0)
    m = _fraction_sqrt(m2) if needs_m else None
    if needs_m and m is None:
        raise GaugeObstruction("classical normalization needs an irrational root")
    return _normalize_table(constants0, x_slots, h_slots, G, Ginv, m2, m)


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def extract_roots(A: QuantumLieAlgebra):
    """Left and right root tables: [H_k, X_a] = l_a(H_k) X_a and
    [X_a, H_k] = -r_a(H_k) X_a.  Keys are (x_index, h_position)."""
    l, r = {}, {}
    for x in A.x_indices():
        for pos, h in enumerate(A.h_indices()):
            lv = A.structure_constant(h, x, x)
            rv = -A.structure_constant(x, h, x)
            if not lv.is_zero():
                l[(x, pos)] = lv
            if not rv.is_zero():
                r[(x, pos)] = rv
    return l, r


def check_gradation(A: QuantumLieAlgebra) -> dict:
    """Every nonzero f_ab^c must satisfy grade(c) = grade(a) + grade(b);
    off-diagonal Cartan output from two root vectors is likewise graded."""
    witness = None
    for (a, b, c), val in sorted(A.constants.items()):
        if val.is_zero():
            continue
        ga, gb, gc = A.grade(a), A.grade(b), A.grade(c)
        if tuple(x + y for x, y in zip(ga, gb)) != gc:
            witness = [a, b, c]
            break
    return {"ok": witness is None, "witness": witness}


def check_q_antisymmetry(A: QuantumLieAlgebra) -> dict:
    """f_ab^c(v) = -f_ba^c(v^{-1}) entrywise in the given basis."""
    witness = None
    keys = set(A.constants) | {(b, a, c) for (a, b, c) in A.constants}
    for (a, b, c) in sorted(keys):
        lhs = A.structure_constant(a, b, c)
        rhs = -A.structure_constant(b, a, c).qconjugate()
        if not (lhs - rhs).is_zero():
            witness = [a, b, c]
            break
    return {"ok": witness is None, "witness": witness}


def check_lr_identity(A: QuantumLieAlgebra) -> dict:
    """r_a(H_k) = -l_{a'}(H_k) where a' carries the opposite root."""
    l, r = extract_roots(A)
    roots = A.root_index()
    witness = None
    for x in A.x_indices():
        neg = tuple(-c for c in A.basis[x].root)
        if neg not in roots:
            witness = [x]
            break
        y = roots[neg]
        for pos in range(len(A.h_indices())):
            lhs = r.get((x, pos), RF_ZERO)
            rhs = -l.get((y, pos), RF_ZERO)
            if not (lhs - rhs).is_zero():
                witness = [x, pos]
                break
        if witness:
            break
    return {"ok": witness is None, "witness": witness}


def check_classical_limit(A: QuantumLieAlgebra, budget_dim: int = DEFAULT_DIM_BUDGET) -> dict:
    """Evaluate at v = 1 and check: antisymmetry, the Jacobi identity,
    commuting Cartan, l = r with a single proportionality l_a = kappa * alpha,
    and exact agreement with the independent rational oracle (the classical
    pipeline for generic provenance, (s+t)(1) times the standard sl_n table
    for the explicit family)."""
    report = {"regular_at_one": True}
    f1 = {}
    for key, val in A.constants.items():
        if not val.is_regular_at_one():
            report["regular_at_one"] = False
            report["all"] = False
            return report
        c1 = val.eval_at_one()
        if c1:
            f1[key] = c1
    dim = A.dim

    keys = set(f1) | {(b, a, c) for (a, b, c) in f1}
    report["antisymmetric"] = all(
        f1.get((a, b, c), Fraction(0)) == -f1.get((b, a, c), Fraction(0))
        for (a, b, c) in keys
    )

    by_pair = {}
    for (a, b, c), val in f1.items():
        by_pair.setdefault((a, b), {})[c] = val

    def brk(a, b):
        return by_pair.get((a, b), {})

    jac = True
    for a in range(dim):
        for b in range(a + 1, dim):
            for c in range(b + 1, dim):
                acc = {}
                for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                    for e, v1 in brk(x, y).items():
                        for f, v2 in brk(e, z).items():
                            acc[f] = acc.get(f, Fraction(0)) + v1 * v2
                if any(acc.values()):
                    jac = False
                    break
            if not jac:
                break
        if not jac:
            break
    report["jacobi"] = jac

    h_slots = A.h_indices()
    report["cartan_abelian"] = not any(
        a in h_slots and b in h_slots for (a, b, c) in f1
    )

    l_eq_r = True
    kappa = None
    uniform = True
    for x in A.x_indices():
        root = A.basis[x].root
        for pos, h in enumerate(h_slots):
            lv = f1.get((h, x, x), Fraction(0))
            rv = -f1.get((x, h, x), Fraction(0))
            if lv != rv:
                l_eq_r = False
            expected = Fraction(root[pos])
            if expected == 0:
                if lv != 0:
                    uniform = False
            else:
                ratio = lv / expected
                if kappa is None:
                    kappa = ratio
                elif ratio != kappa:
                    uniform = False
    report["l_equals_r"] = l_eq_r
    report["kappa"] = str(kappa) if (kappa is not None and uniform) else None

    # l_alpha = r_alpha = alpha against the canonical classical Cartan:
    # H'_i := (2 / alpha_i([X_i, X_-i])) [X_{alpha_i}, X_{-alpha_i}] completes
    # each simple-root pair to an sl2 triple at v = 1, so it must act as the
    # coroot h_i on every root vector.  Basis-independent and square-root
    # free, so it applies to every table.
    n = A.cd.rank
    simple = [tuple(A.cd.cartan[k][j] for k in range(n)) for j in range(n)]
    roots_map = A.root_index()
    roots_classical = True
    for i, alpha in enumerate(simple):
        neg = tuple(-c for c in alpha)
        if alpha not in roots_map or neg not in roots_map:
            roots_classical = False
            break
        xi, yi = roots_map[alpha], roots_map[neg]
        grow = [f1.get((xi, yi, h), Fraction(0)) for h in h_slots]
        ci = sum(
            (gk * f1.get((h, xi, xi), Fraction(0))
             for gk, h in zip(grow, h_slots)),
            Fraction(0),
        )
        if ci == 0:
            roots_classical = False
            break
        scale = Fraction(2) / ci
        for x in A.x_indices():
            root = A.basis[x].root
            acted = scale * sum(
                (gk * f1.get((h, x, x), Fraction(0))
                 for gk, h in zip(grow, h_slots)),
                Fraction(0),
            )
            if acted != Fraction(root[i]):
                roots_classical = False
                break
        if not roots_classical:
            break
    report["roots_classical"] = roots_classical

    oracle = None
    if A.provenance == "explicit-sln" and A.params is not None and not A.normalized:
        n = A.cd.rank + 1
        sigma = (A.params["s"] + A.params["t"]).eval_at_one()
        labels0, table0 = classical_sln_table(n)
        expect_labels = [
            ("X",) + A.basis[a].ij if A.basis[a].kind == "X" else ("H", A.basis[a].index)
            for a in range(dim)
        ]
        assert expect_labels == labels0, "basis order mismatch against the oracle"
        oracle = {k: sigma * v for k, v in table0.items()}
    elif A.provenance == "generic-pipeline":
        _, f0 = classical_bracket(A.cd, budget_dim)
        if A.normalized:
            weights = [lab.root if lab.kind == "X" else (0,) * A.cd.rank
                       for lab in A.basis]
            try:
                f0 = _classical_normalize(f0, weights, A.cd)
            except GaugeObstruction:
                f0 = None
        oracle = f0
    if oracle is None:
        report["oracle_match"] = None
    else:
        report["oracle_match"] = (
            {k: v for k, v in oracle.items() if v} == f1
        )

    report["all"] = all(
        v for k, v in report.items()
        if k in ("regular_at_one", "antisymmetric", "jacobi", "cartan_abelian",
                 "l_equals_r", "roots_classical")
    ) and report["oracle_match"] is not False
    return report


def ad_invariance_of_table(constants: dict, V, T) -> dict:
    """pi(x) o B = B o Delta pi(x) for all generators, for the bracket B
    defined by a constants table written on the module basis of V."""
    B = bracket_matrix(V.dim, constants)
    for i in range(V.cd.rank):
        if not sp_eq(sp_matmul(V.E[i], B), sp_matmul(B, T.dE[i])):
            return {"ok": False, "witness": ["E", i]}
        if not sp_eq(sp_matmul(V.F[i], B), sp_matmul(B, T.dF[i])):
            return {"ok": False, "witness": ["F", i]}
    for (c, p) in B:
        if V.weights[c] != T.weights[p]:
            return {"ok": False, "witness": ["K", c, p]}
    return {"ok": True}


def check_ad_invariance(A: QuantumLieAlgebra, pipe: GenericPipeline = None,
                        budget_dim: int = DEFAULT_DIM_BUDGET) -> dict:
    """pi(x) o B = B o Delta pi(x) for all generators, with B rebuilt from
    the stored constants on the adjoint module.  Only meaningful for raw
    pipeline output (the normalized basis mixes module vectors); explicit
    tables go through check_ad_invariance_explicit instead."""
    if A.provenance != "generic-pipeline" or A.normalized:
        return {"ok": None, "applicable": False}
    if pipe is None:
        V = adjoint_module(A.cd, budget_dim)
        T = tensor_square(V)
    else:
        V, T = pipe.module, pipe.tensor
    rep = ad_invariance_of_table(A.constants, V, T)
    rep["applicable"] = True
    return rep


def transport_explicit_constants(A: QuantumLieAlgebra, phi: dict,
                                 E: QuantumLieAlgebra) -> dict:
    """Rewrite the table of an explicit-family algebra E on the basis of the
    pipeline output A, through the module dictionary phi produced by
    compare_to_explicit(..., with_map=True): phi[g] is the column of the
    basis change, generic index -> {explicit index: coefficient}.

    The dictionary identifies the underlying modules, not a particular
    bracket, so E may carry any admissible (s, t), not just the fitted one.
    """
    dim = A.dim
    P = [[RF_ZERO] * dim for _ in range(dim)]
    for g, col in phi.items():
        for e, x in col.items():
            P[e][g] = x
    Pinv = rf_inverse([list(r) for r in P])
    epairs = {}
    for (ea, eb, ec), val in E.constants.items():
        if not val.is_zero():
            epairs.setdefault((ea, eb), {})[ec] = val
    out = {}
    for a in range(dim):
        for b in range(dim):
            acc = {}
            for ea, xa in phi[a].items():
                for eb, xb in phi[b].items():
                    col = epairs.get((ea, eb))
                    if not col:
                        continue
                    w = xa * xb
                    for ec, val in col.items():
                        cur = acc.get(ec, RF_ZERO) + w * val
                        if cur.is_zero():
                            acc.pop(ec, None)
                        else:
                            acc[ec] = cur
            if not acc:
                continue
            for c in range(dim):
                tot = RF_ZERO
                for ec, val in acc.items():
                    tot = tot + Pinv[c][ec] * val
                if not tot.is_zero():
                    out[(a, b, c)] = tot
    return out


def check_ad_invariance_explicit(E: QuantumLieAlgebra,
                                 pipe: GenericPipeline = None,
                                 fit: dict = None,
                                 budget_dim: int = DEFAULT_DIM_BUDGET) -> dict:
    """Exact ad-invariance for an explicit-family table: transport it onto
    the pipeline module with the fitted basis dictionary, then run the
    matrix identity there."""
    if E.provenance != "explicit-sln":
        return {"ok": None, "applicable": False}
    if pipe is None:
        pipe = generic_pipeline(E.cd, budget_dim)
    if fit is None:
        A = build_generic(E.cd, pipe=pipe)
        fit = compare_to_explicit(A, with_map=True)
    else:
        A = build_generic(E.cd, pipe=pipe)
    if not fit.get("match") or "phi" not in fit:
        return {"ok": None, "applicable": False, "note": "no basis dictionary"}
    table = transport_explicit_constants(A, fit["phi"], E)
    rep = ad_invariance_of_table(table, pipe.module, pipe.tensor)
    rep["applicable"] = True
    return rep


# ---------------------------------------------------------------------------
# fitting a pipeline output to the explicit family
# ---------------------------------------------------------------------------

def _solve_consistent(rows, rhs, ncols):
    """Exact solution of a (possibly overdetermined) consistent linear system
    over Q(v), free variables set to zero; None if inconsistent."""
    if not rows:
        return [RF_ZERO] * ncols
    aug = [list(r) + [y] for r, y in zip(rows, rhs)]
    piv = rf_rref(aug)
    if ncols in piv:
        return None
    sol = [RF_ZERO] * ncols
    for r, pc in enumerate(piv):
        sol[pc] = aug[r][ncols]
    return sol


def compare_to_explicit(A: QuantumLieAlgebra, s=None, t=None,
                        with_map: bool = False) -> dict:
    """Match a graded table on an A-series root system against the explicit
    two-parameter family.

    Fits (s, t) from the Cartan action (gauge-invariantly: the products
    C*s and C*t of the Cartan change of basis with the parameters solve a
    linear system, and their ratio is the fitted epsilon = t/s), then fixes
    the root-vector gauge scalars with simple-root vectors scaled to 1, and
    finally verifies every structure constant exactly.  When s and t are
    both given, the fit is disabled and only the change of basis is solved.
    Follows the convention that for n = 2 the family is one-parameter, so
    the fitted representative is (s, 0).

    with_map additionally returns the raw basis dictionary under "phi"
    (generic index -> {explicit index: RatFunc}) for transporting tables;
    that entry is not JSON-serializable and is left out by default.
    """
    report = {"applicable": True, "match": False, "mismatches": []}
    cd = A.cd
    if cd.series != "A":
        return {"applicable": False, "match": None}
    n = cd.rank + 1
    labels, Ts, Tt = _sln_parts(n)
    epos = {lab: a for a, lab in enumerate(labels)}
    eroot = {}
    for lab in labels:
        if lab[0] == "X":
            eroot[_sln_root(n, lab[1], lab[2])] = epos[lab]
    ehs = [epos[("H", k)] for k in range(1, n)]

    groots = A.root_index()
    ghs = A.h_indices()
    gxs = A.x_indices()
    if len(ghs) != n - 1 or set(groots) != set(eroot):
        report["mismatches"].append("root systems differ")
        return report
    ex_of = {x: eroot[A.basis[x].root] for x in gxs}

    fit = s is None and t is None
    nH = n - 1
    U = [[RF_ZERO] * nH for _ in range(nH)]
    W = [[RF_ZERO] * nH for _ in range(nH)]
    C = [[RF_ZERO] * nH for _ in range(nH)]
    for apos, h in enumerate(ghs):
        rows, rhs = [], []
        for x in sorted(gxs):
            ex = ex_of[x]
            srow = [Ts.get((ehs[k], ex, ex), RF_ZERO) for k in range(nH)]
            trow = [Tt.get((ehs[k], ex, ex), RF_ZERO) for k in range(nH)]
            if fit:
                rows.append(srow + trow)
            else:
                rows.append([s * a2 + t * b2 for a2, b2 in zip(srow, trow)])
            rhs.append(A.structure_constant(h, x, x))
        sol = _solve_consistent(rows, rhs, 2 * nH if fit else nH)
        if sol is None:
            report["mismatches"].append(f"Cartan action row {apos} unfittable")
            return report
        if fit:
            U[apos] = sol[:nH]
            W[apos] = sol[nH:]
        else:
            C[apos] = sol

    if fit:
        eps = None
        if all(x.is_zero() for row in U for x in row):
            s_fit, t_fit = RF_ZERO, RF_ONE
            C = W
        else:
            for i in range(nH):
                for j in range(nH):
                    if U[i][j].is_zero():
                        continue
                    cand = W[i][j] / U[i][j]
                    if eps is None:
                        eps = cand
                    elif not (eps - cand).is_zero():
                        report["mismatches"].append("parameter ratio not uniform")
                        return report
            if eps is None:
                eps = RF_ZERO
            for i in range(nH):
                for j in range(nH):
                    if not (W[i][j] - eps * U[i][j]).is_zero():
                        report["mismatches"].append("parameter ratio not uniform")
                        return report
            s_fit, t_fit = RF_ONE, eps
            C = U
        report["epsilon"] = str(eps) if eps is not None else None
        report["eps_bar_invariant"] = (
            (eps - eps.qconjugate()).is_zero() if eps is not None else None
        )
    else:
        s_fit = s if isinstance(s, RatFunc) else RatFunc(s)
        t_fit = t if isinstance(t, RatFunc) else RatFunc(t)
        report["epsilon"] = None
        report["eps_bar_invariant"] = None
    report["fitted_s"] = str(s_fit)
    report["fitted_t"] = str(t_fit)
    report["cartan_map"] = [[str(x) for x in row] for row in C]

    try:
        rf_inverse([list(r) for r in C])
    except ZeroDivisionError:
        report["mismatches"].append("Cartan change of basis is singular")
        return report

    tfit = {}
    for key in set(Ts) | set(Tt):
        val = s_fit * Ts.get(key, RF_ZERO) + t_fit * Tt.get(key, RF_ZERO)
        if not val.is_zero():
            tfit[key] = val
    tfit_pairs = {}
    for (a, b, c), val in tfit.items():
        tfit_pairs.setdefault((a, b), {})[c] = val

    # gauge scalars: simple-root vectors pinned to 1, the rest propagated
    simple = [tuple(cd.cartan[k][j] for k in range(cd.rank)) for j in range(cd.rank)]
    scal = {groots[alpha]: RF_ONE for alpha in simple}
    a_pairs = {}
    for (a, b, c), val in A.constants.items():
        a_pairs.setdefault((a, b), {})[c] = val
    xset = set(gxs)
    progress = True
    while progress and len(scal) < len(gxs):
        progress = False
        for x1 in list(scal):
            for x2 in list(scal):
                col = a_pairs.get((x1, x2))
                if not col:
                    continue
                for c, val in col.items():
                    if c in xset and c not in scal and not val.is_zero():
                        tv = tfit.get((ex_of[x1], ex_of[x2], ex_of[c]), RF_ZERO)
                        if tv.is_zero():
                            report["mismatches"].append(
                                f"explicit constant vanishes where f[{x1},{x2}]^{c} does not")
                            return report
                        scal[c] = scal[x1] * scal[x2] * tv / val
                        progress = True
        for x1 in list(scal):
            neg = tuple(-v for v in A.basis[x1].root)
            x2 = groots[neg]
            if x2 in scal:
                continue
            for k in range(nH):
                tv = tfit.get((ex_of[x1], ex_of[x2], ehs[k]), RF_ZERO)
                if tv.is_zero():
                    continue
                acc = RF_ZERO
                for apos, h in enumerate(ghs):
                    acc = acc + A.structure_constant(x1, x2, h) * C[apos][k]
                scal[x2] = acc / (scal[x1] * tv)
                progress = True
                break
    if len(scal) < len(gxs):
        report["mismatches"].append("gauge scalars not determined for all roots")
        return report
    report["scalars"] = {A.basis[x].name(): str(v) for x, v in sorted(scal.items())}

    # full verification of every constant through the fitted map
    phicols = {}
    for x in gxs:
        phicols[x] = {ex_of[x]: scal[x]}
    for apos, h in enumerate(ghs):
        phicols[h] = {ehs[k]: C[apos][k]
                      for k in range(nH) if not C[apos][k].is_zero()}
    if with_map:
        report["phi"] = phicols
    mismatches = []
    for ga in range(A.dim):
        for gb in range(A.dim):
            lhs = {}
            for c, val in a_pairs.get((ga, gb), {}).items():
                for ec, xc in phicols[c].items():
                    cur = lhs.get(ec, RF_ZERO) + val * xc
                    if cur.is_zero():
                        lhs.pop(ec, None)
                    else:
                        lhs[ec] = cur
            rhs2 = {}
            for ea, xa in phicols[ga].items():
                for eb, xb in phicols[gb].items():
                    for ec, val in tfit_pairs.get((ea, eb), {}).items():
                        cur = rhs2.get(ec, RF_ZERO) + xa * xb * val
                        if cur.is_zero():
                            rhs2.pop(ec, None)
                        else:
                            rhs2[ec] = cur
            keys = set(lhs) | set(rhs2)
            if any(not (lhs.get(k, RF_ZERO) - rhs2.get(k, RF_ZERO)).is_zero()
                   for k in keys):
                mismatches.append([ga, gb])
    report["mismatches"] = mismatches
    report["match"] = not mismatches
    return report


def check_tau_sln(A: QuantumLieAlgebra) -> dict:
    """The flip X_ij -> -X_{n+1-j,n+1-i}, H_i -> H_{n-i} as a candidate
    automorphism of the explicit family (holds iff t = s there)."""
    if A.provenance != "explicit-sln":
        return {"ok": None, "applicable": False}
    n = A.cd.rank + 1
    perm = {}
    sign = {}
    for a, lab in enumerate(A.basis):
        if lab.kind == "X":
            i, j = lab.ij
            target = (n + 1 - j, n + 1 - i)
            for b, lab2 in enumerate(A.basis):
                if lab2.kind == "X" and lab2.ij == target:
                    perm[a] = b
                    sign[a] = Fraction(-1)
                    break
        else:
            k = lab.index
            for b, lab2 in enumerate(A.basis):
                if lab2.kind == "H" and lab2.index == n - k:
                    perm[a] = b
                    sign[a] = Fraction(1)
                    break
    witness = None
    keys = set(A.constants) | {
        (perm[a], perm[b], perm[c]) for (a, b, c) in A.constants
    }
    for (a, b, c) in sorted(keys):
        # tau([x_a, x_b]) = [tau x_a, tau x_b]
        lhs = A.structure_constant(perm[a], perm[b], perm[c])
        rhs = A.structure_constant(a, b, c) * RatFunc(sign[a] * sign[b] * sign[c])
        if not (lhs - rhs).is_zero():
            witness = [a, b, c]
            break
    return {"ok": witness is None, "witness": witness, "applicable": True}
