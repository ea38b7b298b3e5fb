"""Exact arithmetic in the deformation parameter.

Everything downstream works over the field Q(v) where v = q^(1/2), so that
both integer powers of q and the half-integer powers needed by the explicit
sl_n constants stay representable.  Two types are provided:

* ``LaurentPoly`` -- a Laurent polynomial sum c_k v^k with Fraction
  coefficients, stored as a dict {exponent: coefficient} without zero entries.
* ``RatFunc`` -- a normalized quotient of two Laurent polynomials
  (gcd removed, denominator valuation shifted to 0, monic leading
  coefficient), so equality is plain structural equality.

The classical limit is evaluation at v = 1; q-conjugation is the ring
automorphism v -> 1/v (i.e. h -> -h for q = e^h); the first h-derivative at
h = 0 is (1/2) d/dv evaluated at v = 1.

All operations are pure; no instance is mutated after construction.
"""

from __future__ import annotations

from fractions import Fraction


class DenominatorVanishes(ZeroDivisionError):
    """Raised when a classical limit or derivative hits a pole at v = 1."""


class InvalidRange(ValueError):
    """Raised for q-binomial arguments outside 0 <= b <= a."""


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class LaurentPoly:
    """Laurent polynomial in v over Q, as a dict {exponent: Fraction}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, x in coeffs.items():
                x = _fr(x)
                if x != 0:
                    c[int(e)] = x
        self.coeffs = c

    # -- constructors -----------------------------------------------------

    @staticmethod
    def constant(x) -> "LaurentPoly":
        return LaurentPoly({0: _fr(x)})

    @staticmethod
    def v_power(k: int, coeff=1) -> "LaurentPoly":
        """coeff * v^k"""
        return LaurentPoly({k: _fr(coeff)})

    @staticmethod
    def q_power(k: int, coeff=1) -> "LaurentPoly":
        """coeff * q^k with q = v^2."""
        return LaurentPoly({2 * k: _fr(coeff)})

    # -- basic structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def degree(self) -> int:
        """Largest exponent (raises on zero)."""
        return max(self.coeffs)

    def valuation(self) -> int:
        """Smallest exponent (raises on zero)."""
        return min(self.coeffs)

    def leading_coeff(self) -> Fraction:
        return self.coeffs[self.degree()]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if isinstance(other, RatFunc):
            return other == self
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if isinstance(other, RatFunc):
            return RatFunc(self) + other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self.coeffs)
        for e, x in other.coeffs.items():
            s = c.get(e, _ZERO_FR) + x
            if s:
                c[e] = s
            elif e in c:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e: -x for e, x in self.coeffs.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if isinstance(other, RatFunc):
            return RatFunc(self) - other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            x = _fr(other)
            if not x:
                return LaurentPoly()
            out = LaurentPoly.__new__(LaurentPoly)
            out.coeffs = {e: c * x for e, c in self.coeffs.items()}
            return out
        if isinstance(other, RatFunc):
            return RatFunc(self) * other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = {}
        for e1, x1 in self.coeffs.items():
            for e2, x2 in other.coeffs.items():
                e = e1 + e2
                s = c.get(e, _ZERO_FR) + x1 * x2
                if s:
                    c[e] = s
                elif e in c:
                    del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = c
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(LaurentPoly.constant(1), self ** (-n))
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        return other * RatFunc(LaurentPoly.constant(1), self)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e + k: x for e, x in self.coeffs.items()}
        return out

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ValueError if the division has a remainder."""
        q, r = _divmod_laurent(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    # -- ring maps ---------------------------------------------------------

    def qconjugate(self) -> "LaurentPoly":
        """The bar involution v -> 1/v (equivalently h -> -h)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {-e: x for e, x in self.coeffs.items()}
        return out

    def eval_at_one(self) -> Fraction:
        """Value at v = 1 (sum of coefficients)."""
        return sum(self.coeffs.values(), _ZERO_FR)

    def eval(self, x: Fraction) -> Fraction:
        """Exact evaluation at a nonzero rational point."""
        x = _fr(x)
        if x == 0:
            raise ZeroDivisionError("Laurent polynomials cannot be evaluated at 0")
        return sum(c * x**e for e, c in self.coeffs.items())

    def derivative(self) -> "LaurentPoly":
        """d/dv."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e - 1: e * x for e, x in self.coeffs.items() if e != 0}
        return out

    # -- serialization / printing -------------------------------------------

    def to_json(self) -> dict:
        """Map {exponent (string): coefficient (string "p/q")}; variable is v."""
        return {str(e): str(self.coeffs[e]) for e in sorted(self.coeffs)}

    @staticmethod
    def from_json(d: dict) -> "LaurentPoly":
        return LaurentPoly({int(e): Fraction(x) for e, x in d.items()})

    def __str__(self):
        return format_laurent(self)


_ZERO_FR = Fraction(0)


def _term_str(coeff: Fraction, exp: int) -> str:
    """Render coeff*v^exp, preferring q = v^2 for even exponents."""
    if exp == 0:
        return str(coeff)
    if exp % 2 == 0:
        var, e = "q", exp // 2
    else:
        var, e = "v", exp
    body = var if e == 1 else f"{var}^{e}" if e >= 0 else f"{var}^{{{e}}}"
    if coeff == 1:
        return body
    if coeff == -1:
        return f"-{body}"
    return f"{coeff}*{body}"


def format_laurent(p: LaurentPoly) -> str:
    """Human-readable form, highest exponent first: '2*q - 2*q^{-1}'."""
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.coeffs, reverse=True):
        t = _term_str(p.coeffs[e], e)
        if parts:
            parts.append(f"- {t[1:]}" if t.startswith("-") else f"+ {t}")
        else:
            parts.append(t)
    return " ".join(parts)


def _divmod_laurent(a: LaurentPoly, b: LaurentPoly):
    """Quotient/remainder; remainder is taken in the ordinary-poly sense
    after shifting both operands to valuation 0."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if a.is_zero():
        return LaurentPoly(), LaurentPoly()
    sa, sb = a.valuation(), b.valuation()
    num = {e - sa: c for e, c in a.coeffs.items()}
    den = {e - sb: c for e, c in b.coeffs.items()}
    dn, dd = max(num), max(den)
    lead = den[dd]
    quot = {}
    while num and max(num) >= dd:
        e = max(num)
        f = num[e] / lead
        quot[e - dd] = f
        for ed, cd in den.items():
            k = e - dd + ed
            s = num.get(k, _ZERO_FR) - f * cd
            if s:
                num[k] = s
            elif k in num:
                del num[k]
    q = LaurentPoly(quot).shift(sa - sb)
    r = LaurentPoly(num).shift(sa)
    return q, r


def laurent_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd as ordinary polynomials (valuation factors v^k are units
    in the Laurent ring and are dropped)."""
    if a.is_zero():
        return _monic_val0(b)
    if b.is_zero():
        return _monic_val0(a)
    a = _monic_val0(a)
    b = _monic_val0(b)
    while not b.is_zero():
        _, r = _divmod_laurent(a, b)
        a, b = b, _monic_val0(r) if not r.is_zero() else LaurentPoly()
    return a


def _monic_val0(p: LaurentPoly) -> LaurentPoly:
    if p.is_zero():
        return p
    return p.shift(-p.valuation()) * (1 / p.leading_coeff())


def laurent_sqrt(p: LaurentPoly):
    """Exact square root if one exists in Q[v, 1/v], else None."""
    if p.is_zero():
        return LaurentPoly()
    lo, hi = p.valuation(), p.degree()
    if (hi - lo) % 2 or lo % 2:
        return None
    lead = p.coeffs[hi]
    root_lead = _fraction_sqrt(lead)
    if root_lead is None:
        return None
    # synthesize the root coefficient by coefficient from the top
    half = (hi - lo) // 2
    r = {hi // 2: root_lead}
    work = dict(p.coeffs)
    for e in range(hi // 2 - 1, hi // 2 - half - 1, -1):
        # coefficient of v^(e + hi//2) in r^2 must match p
        target = work.get(e + hi // 2, _ZERO_FR)
        acc = _ZERO_FR
        for e1, c1 in r.items():
            e2 = e + hi // 2 - e1
            if e2 in r and e1 != e:
                acc += c1 * r[e2]
        # r[e] contributes 2*root_lead*r[e] via (e, hi//2) pairing
        c = (target - acc) / (2 * root_lead)
        if c:
            r[e] = c
    cand = LaurentPoly(r)
    if cand * cand == p:
        return cand
    return None


def _fraction_sqrt(x: Fraction):
    if x < 0:
        return None
    from math import isqrt

    pn, pd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


class RatFunc:
    """Normalized quotient num/den of Laurent polynomials.

    Invariants: den is nonzero with valuation 0 and leading coefficient 1,
    and gcd(num, den) = 1, so structurally equal objects are equal values
    and vice versa.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly.constant(num)
        if den is None:
            den = LaurentPoly.constant(1)
        elif isinstance(den, (int, Fraction)):
            den = LaurentPoly.constant(den)
        if den.is_zero():
            raise DenominatorVanishes("zero denominator")
        if num.is_zero():
            self.num = LaurentPoly()
            self.den = LaurentPoly.constant(1)
            return
        g = laurent_gcd(num, den)
        if g.degree() > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        shift = -den.valuation()
        scale = 1 / den.leading_coeff()
        self.num = num.shift(shift) * scale
        self.den = den.shift(shift) * scale

    @staticmethod
    def _raw(num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        out = RatFunc.__new__(RatFunc)
        out.num = num
        out.den = den
        return out

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den == LaurentPoly.constant(1)

    def as_laurent(self) -> LaurentPoly:
        if not self.is_polynomial():
            raise ValueError("not a Laurent polynomial")
        return self.num

    def __eq__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"RatFunc({self.num!s})"
        return f"RatFunc({self.num!s} / {self.den!s})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RF_ZERO
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return (RF_ONE / self) ** (-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "RatFunc":
        return RF_ONE / self

    # -- ring maps ----------------------------------------------------------------

    def qconjugate(self) -> "RatFunc":
        return RatFunc(self.num.qconjugate(), self.den.qconjugate())

    def eval_at_one(self) -> Fraction:
        d = self.den.eval_at_one()
        if d == 0:
            raise DenominatorVanishes("pole at v = 1")
        return self.num.eval_at_one() / d

    def is_regular_at_one(self) -> bool:
        return self.den.eval_at_one() != 0

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(d: dict) -> "RatFunc":
        return RatFunc(LaurentPoly.from_json(d["num"]), LaurentPoly.from_json(d["den"]))


def _coerce_rf(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RatFunc(x)
    if isinstance(x, (int, Fraction)):
        return RatFunc(LaurentPoly.constant(x))
    return NotImplemented


RF_ZERO = RatFunc(0)
RF_ONE = RatFunc(1)
V = LaurentPoly.v_power(1)
Q = LaurentPoly.q_power(1)


def qconjugate(p):
    """Bar involution v -> 1/v on LaurentPoly or RatFunc (same type out)."""
    return p.qconjugate()


def classical_limit(p):
    """Exact value at v = 1; raises DenominatorVanishes on a pole."""
    if isinstance(p, LaurentPoly):
        return p.eval_at_one()
    if isinstance(p, RatFunc):
        return p.eval_at_one()
    if isinstance(p, (int, Fraction)):
        return _fr(p)
    raise TypeError(f"cannot take classical limit of {type(p).__name__}")


def h_derivative_at_zero(p):
    """First derivative with respect to h at h = 0, for q = e^h = v^2.

    Equals (1/2) * (d/dv p)(1).  Accepts RatFunc as long as the denominator
    does not vanish at v = 1 (quotient rule, exact).
    """
    if isinstance(p, LaurentPoly):
        return Fraction(1, 2) * p.derivative().eval_at_one()
    if isinstance(p, RatFunc):
        d1 = p.den.eval_at_one()
        if d1 == 0:
            raise DenominatorVanishes("pole at v = 1")
        n, d = p.num, p.den
        val = (n.derivative().eval_at_one() * d1 - n.eval_at_one() * d.derivative().eval_at_one()) / (d1 * d1)
        return Fraction(1, 2) * val
    raise TypeError(f"cannot differentiate {type(p).__name__}")


def q_int(n: int, d: int = 1) -> LaurentPoly:
    """Symmetric q-integer [n] in base q_d = v^(2d):
    (q_d^n - q_d^-n)/(q_d - q_d^-1) = v^(2d(n-1)) + v^(2d(n-3)) + ...
    """
    if d <= 0:
        raise InvalidRange("d must be a positive integer")
    if n == 0:
        return LaurentPoly()
    sign = 1
    if n < 0:
        sign, n = -1, -n
    return LaurentPoly({2 * d * (n - 1 - 2 * k): sign for k in range(n)})


def q_factorial(n: int, d: int = 1) -> LaurentPoly:
    """[n]! = [1][2]...[n] in base q_d."""
    if n < 0:
        raise InvalidRange("factorial of a negative integer")
    out = LaurentPoly.constant(1)
    for k in range(2, n + 1):
        out = out * q_int(k, d)
    return out


def q_binomial(a: int, b: int, d: int = 1) -> LaurentPoly:
    """Gaussian binomial [a choose b] in base q_d; exact Laurent polynomial."""
    if not 0 <= b <= a:
        raise InvalidRange(f"q-binomial out of range: ({a}, {b})")
    num = LaurentPoly.constant(1)
    for k in range(b):
        num = num * q_int(a - k, d)
    return num.exact_div(q_factorial(b, d))


def parse_scalar(text: str) -> RatFunc:
    """Parse a rational-function string over tokens q, v, integers, + - * / ^ ( ).

    q is interpreted as v^2.  Used by the CLI for --s/--t and by tests.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take(expected=None):
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"parse error in {text!r} at token {pos[0]}: expected {expected}, got {tok}")
        pos[0] += 1
        return tok

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = parse_factor()
            node = node * rhs if op == "*" else node / rhs
        return node

    def parse_factor():
        tok = peek()
        if tok == "-":
            take()
            return -parse_factor()
        if tok == "+":
            take()
            return parse_factor()
        return parse_power()

    def parse_power():
        base = parse_atom()
        if peek() == "^":
            take()
            wrapped = peek() == "("
            if wrapped:
                take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            exp_tok = take()
            if not isinstance(exp_tok, int):
                raise ValueError(f"exponent must be an integer in {text!r}")
            if wrapped:
                take(")")
            return base ** (-exp_tok if neg else exp_tok)
        return base

    def parse_atom():
        tok = peek()
        if tok == "(":
            take()
            node = parse_expr()
            take(")")
            return node
        if tok == "q":
            take()
            return RatFunc(Q)
        if tok == "v":
            take()
            return RatFunc(V)
        if isinstance(tok, int):
            take()
            return RatFunc(tok)
        raise ValueError(f"parse error in {text!r}: unexpected token {tok!r}")

    result = parse_expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*/^()":
            tokens.append(c)
            i += 1
        elif c in "{}":
            # exponent braces in printed tables read back as parentheses
            tokens.append("(" if c == "{" else ")")
            i += 1
        elif c in "qv":
            tokens.append(c)
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        else:
            raise ValueError(f"bad character {c!r} in scalar expression")
    if not tokens:
        raise ValueError("empty scalar expression")
    return tokens
