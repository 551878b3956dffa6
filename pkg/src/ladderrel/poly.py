"""Dense univariate polynomials over a generic exact coefficient ring.

A Poly is a tuple of coefficients (ascending powers) plus a variable tag.
Coefficients are either exact rationals (int / Fraction / gmpy2.mpq) or
Poly instances themselves, which is how multivariate objects are built:
e.g. a denominator D(z) whose coefficients are polynomials in p whose
coefficients are polynomials in rho.

Everything here is exact; no floating point enters this module.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .rings import Q, is_rational, rational


class VariableMismatch(ValueError):
    """Binary operation on polynomials with different variable tags."""


def _is_zero(c) -> bool:
    if isinstance(c, Poly):
        return c.is_zero()
    return c == 0


class Poly:
    """Immutable dense polynomial; coefficients ascending in the variable."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable, var: str):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c, var: str) -> "Poly":
        return Poly([c], var)

    @staticmethod
    def x(var: str) -> "Poly":
        return Poly([0, 1], var)

    @staticmethod
    def from_ints(coeffs: Sequence[int], var: str) -> "Poly":
        return Poly([Q(c) for c in coeffs], var)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lc(self):
        """Leading coefficient."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self):
        """The constant term (0 for the zero polynomial)."""
        return self.coeffs[0] if self.coeffs else 0

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "Poly"):
        if self.var != other.var:
            raise VariableMismatch(f"{self.var!r} vs {other.var!r}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            cs = list(self.coeffs) or [0]
            cs[0] = cs[0] + other
            return Poly(cs, self.var)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Poly(cs, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly([], self.var)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if _is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out, self.var)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply every coefficient by a coefficient-ring element."""
        if _is_zero(c):
            return Poly([], self.var)
        return Poly([ci * c for ci in self.coeffs], self.var)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.var == other.var and self.coeffs == other.coeffs
        return self.is_constant() and self.constant_value() == other

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            cs = f"({c})" if isinstance(c, Poly) else str(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(f"{cs}*{self.var}")
            else:
                terms.append(f"{cs}*{self.var}^{k}")
        return " + ".join(terms)

    # -- calculus / evaluation --------------------------------------------

    def derivative(self) -> "Poly":
        """Formal derivative with respect to this polynomial's variable."""
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        """Evaluate at x (any ring element / Poly); Horner scheme."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, g: "Poly") -> "Poly":
        """Substitute the polynomial g for this polynomial's variable."""
        acc = Poly([], g.var)
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def map_coeffs(self, fn: Callable, var: str | None = None) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], var or self.var)

    def shift_mul(self, k: int) -> "Poly":
        """Multiply by var**k."""
        if self.is_zero():
            return self
        return Poly([0] * k + list(self.coeffs), self.var)

    def truncate(self, n: int) -> "Poly":
        """Drop all terms of degree >= n."""
        return Poly(self.coeffs[:n], self.var)

    # -- exact division ----------------------------------------------------

    def divmod(self, other: "Poly"):
        """Exact-ring long division: works whenever every leading-coefficient
        division happens to be exact (always true for field coefficients and
        for the Bareiss/exact-divide call sites used here)."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlc = other.lc()
        dd = other.degree()
        qcoeffs = [0] * max(0, len(rem) - dd)
        while len(rem) - 1 >= dd and rem:
            while rem and _is_zero(rem[-1]):
                rem.pop()
            if len(rem) - 1 < dd:
                break
            qc = _exact_coeff_div(rem[-1], dlc)
            k = len(rem) - 1 - dd
            qcoeffs[k] = qc
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - qc * c
            rem.pop()
        return Poly(qcoeffs, self.var), Poly(rem, self.var)

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.exact_div(other)
        return self.scale(_invert_scalar(other))


def _invert_scalar(c):
    c = rational(c)
    return Q(c.denominator, c.numerator)


def _exact_coeff_div(a, b):
    """Divide coefficient a by coefficient b, exactly."""
    if isinstance(b, Poly):
        if not isinstance(a, Poly):
            a = Poly.const(a, b.var)
        return a.exact_div(b)
    if isinstance(a, Poly):
        return a / b
    return rational(a) / rational(b)


# -- content / primitive part / gcd ---------------------------------------


def content(f: Poly):
    """Gcd of coefficients: rational content for scalar coefficients,
    recursive polynomial gcd for nested coefficients."""
    if f.is_zero():
        return 0
    if isinstance(f.coeffs[0], Poly) or any(isinstance(c, Poly) for c in f.coeffs):
        var = next(c.var for c in f.coeffs if isinstance(c, Poly))
        g = None
        for c in f.coeffs:
            cp = c if isinstance(c, Poly) else Poly.const(c, var)
            g = cp if g is None else gcd(g, cp)
            if g.is_constant() and not g.is_zero():
                break
        # gcd() returns primitive parts; fold the rational content back in
        # so proportional() sees through scalar multiples of nested polys
        return g.scale(_scalar_content(f))
    from math import gcd as igcd, lcm

    nums = [rational(c) for c in f.coeffs]
    gn = 0
    ld = 1
    for c in nums:
        gn = igcd(gn, abs(c.numerator))
        ld = lcm(ld, c.denominator)
    return Q(gn, ld)


def _scalar_content(f: Poly):
    """Rational gcd of all scalar leaves of a (possibly nested) polynomial."""
    from math import gcd as igcd, lcm

    gn = 0
    ld = 1
    for c in f.coeffs:
        if isinstance(c, Poly):
            q = _scalar_content(c)
        else:
            q = rational(c)
        gn = igcd(gn, abs(q.numerator))
        ld = lcm(ld, q.denominator)
    return Q(gn, ld)


def _leading_scalar(c):
    while isinstance(c, Poly):
        c = c.lc()
    return rational(c)


def primitive(f: Poly) -> Poly:
    """Divide out the content; sign of the innermost leading scalar
    normalized positive."""
    if f.is_zero():
        return f
    c = content(f)
    g = f.map_coeffs(lambda x: _exact_coeff_div(x, c))
    if _leading_scalar(g.lc()) < 0:
        g = -g
    return g


def gcd(f: Poly, g: Poly) -> Poly:
    """Polynomial gcd via the primitive PRS (subresultant-style with content
    removal); valid over Q and over nested polynomial rings."""
    if f.var != g.var:
        raise VariableMismatch(f"{f.var!r} vs {g.var!r}")
    if f.is_zero():
        return primitive(g)
    if g.is_zero():
        return primitive(f)
    cf, cg = content(f), content(g)
    a, b = primitive(f), primitive(g)
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b)
        a, b = b, (primitive(r) if not r.is_zero() else Poly([], a.var))
    cont = _coeff_gcd(cf, cg, f.var)
    if isinstance(cont, Poly) and not cont.is_constant():
        return a.scale(cont)
    return a


def _coeff_gcd(cf, cg, var):
    if isinstance(cf, Poly) or isinstance(cg, Poly):
        v = cf.var if isinstance(cf, Poly) else cg.var
        cfp = cf if isinstance(cf, Poly) else Poly.const(cf, v)
        cgp = cg if isinstance(cg, Poly) else Poly.const(cg, v)
        return gcd(cfp, cgp)
    return 1  # rationals form a field; content already stripped


def _pseudo_rem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    d = a.degree() - b.degree()
    if d < 0:
        return a
    lb = b.lc()
    rem = a
    for _ in range(d + 1):
        if rem.degree() < b.degree():
            rem = rem.scale(lb)
            continue
        k = rem.degree() - b.degree()
        rem = rem.scale(lb) - (b.shift_mul(k)).scale(rem.lc())
    return rem


def monic(f: Poly) -> Poly:
    """Scale a rational-coefficient polynomial to leading coefficient 1."""
    return f.map_coeffs(lambda c: rational(c) / rational(f.lc()))


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over the rationals: [(factor, multiplicity), ...].
    The product of factor**multiplicity equals f up to a constant."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    f = primitive(f)
    if f.degree() == 0:
        return []
    df = f.derivative()
    a = gcd(f, df)
    out: list[tuple[Poly, int]] = []
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while not (b.is_constant()):
        p = gcd(b, d)
        if p.degree() > 0:
            out.append((primitive(p), i))
        b = b.exact_div(p)
        c = d.exact_div(p)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct irreducible factors (repeated roots collapsed).
    Computed as f / gcd(f, f'), which avoids the full Yun recursion --- the
    gcd chain gets expensive over nested coefficient rings."""
    f = primitive(f)
    if f.degree() < 1:
        return f
    g = gcd(f, f.derivative())
    if g.degree() < 1:
        return f
    return primitive(f.exact_div(g))


def divides(f: Poly, g: Poly) -> bool:
    """True iff f divides g exactly."""
    try:
        g.divmod(f)[1]
    except (ValueError, ZeroDivisionError):
        return False
    return g.divmod(f)[1].is_zero()


def proportional(f: Poly, g: Poly) -> bool:
    """True iff f = c*g for a nonzero constant c (coefficient-vector test)."""
    if f.degree() != g.degree():
        return False
    if f.is_zero():
        return g.is_zero()
    return primitive(f) == primitive(g) or primitive(f) == -primitive(g)


# -- Sylvester matrix / resultants -----------------------------------------


def eval_var(f, var: str, value):
    """Evaluate the named variable wherever it sits in the coefficient
    nesting, leaving the other variables polynomial."""
    if not isinstance(f, Poly):
        return f
    if f.var == var:
        acc = None
        for c in reversed(f.coeffs):
            c = eval_var(c, var, value)
            acc = c if acc is None else acc * value + c
        return acc if acc is not None else 0
    return f.map_coeffs(lambda c: eval_var(c, var, value))


def swap_nested(f: Poly) -> Poly:
    """Transpose a two-level polynomial: Poly in x over Poly in y becomes
    Poly in y over Poly in x."""
    inner = next((c.var for c in f.coeffs if isinstance(c, Poly)), None)
    if inner is None:
        raise ValueError("not a nested polynomial")
    rows: list[list] = []
    for i, c in enumerate(f.coeffs):
        cs = list(c.coeffs) if isinstance(c, Poly) else [c]
        for j, a in enumerate(cs):
            while len(rows) <= j:
                rows.append([])
            row = rows[j]
            while len(row) <= i:
                row.append(0)
            row[i] = a
    return Poly([Poly(r, f.var) for r in rows], inner)


def sylvester(f: Poly, g: Poly) -> list[list]:
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0 or (m == 0 and n == 0):
        raise ValueError("degenerate resultant input")
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix: list[list]):
    """Fraction-free Bareiss determinant over any integral domain whose
    elements support *, -, and exact division."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pk - m[i][k] * m[k][j]
                m[i][j] = _exact_coeff_div(num, prev)
            m[i][k] = 0
        prev = pk
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def _max_inner_degree(f: Poly) -> int:
    return max((c.degree() for c in f.coeffs if isinstance(c, Poly)), default=0)


def _inner_var(f: Poly, g: Poly) -> str | None:
    for c in (*f.coeffs, *g.coeffs):
        if isinstance(c, Poly):
            return c.var
    return None


def _eval_coeffs(f: Poly, x) -> Poly:
    """Evaluate every (polynomial) coefficient of f at x."""
    return f.map_coeffs(lambda c: c(x) if isinstance(c, Poly) else c)


def resultant(f: Poly, g: Poly) -> object:
    """Resultant of f and g with respect to their (common) variable.

    Scalar coefficients: fraction-free Bareiss on the Sylvester matrix.
    Polynomial coefficients: exact evaluation/interpolation on the innermost
    remaining variable, recursing one level at a time.  Interpolation nodes
    where a leading coefficient vanishes are skipped, since specialization
    only commutes with the resultant when the degrees are preserved.
    """
    if f.var != g.var:
        raise VariableMismatch(f"{f.var!r} vs {g.var!r}")
    if f.is_zero() or g.is_zero():
        return 0
    if f.degree() == 0 and g.degree() == 0:
        raise ValueError("degenerate resultant: both operands constant")
    if f.degree() == 0:
        return _ring_pow(f.coeffs[0], g.degree())
    if g.degree() == 0:
        return _ring_pow(g.coeffs[0], f.degree())
    ivar = _inner_var(f, g)
    if ivar is None:
        return bareiss_det(sylvester(f, g))
    bound = f.degree() * _max_inner_degree(g) + g.degree() * _max_inner_degree(f)
    nodes, values = [], []
    x = 0
    while len(nodes) <= bound:
        pt = Q(x)
        x = -x if x > 0 else -x + 1
        flc = f.lc()(pt) if isinstance(f.lc(), Poly) else f.lc()
        glc = g.lc()(pt) if isinstance(g.lc(), Poly) else g.lc()
        if _is_zero(flc) or _is_zero(glc):
            continue
        fr = _eval_coeffs(f, pt)
        gr = _eval_coeffs(g, pt)
        nodes.append(pt)
        values.append(resultant(fr, gr))
    return lagrange_interpolate(nodes, values, ivar)


def _ring_pow(c, n: int):
    out = 1
    for _ in range(n):
        out = out * c
    return out


def lagrange_interpolate(nodes: Sequence, values: Sequence, var: str) -> Poly:
    """Exact Lagrange interpolation through (node, value) pairs.
    Values may be ring elements (scalars or deeper Polys); nodes rational."""
    n = len(nodes)
    newton = [values[i] for i in range(n)]
    # Newton divided differences keep the work O(n^2).
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dx = rational(nodes[i]) - rational(nodes[i - level])
            diff = newton[i] - newton[i - 1]
            if isinstance(diff, Poly):
                newton[i] = diff / dx
            else:
                newton[i] = rational(diff) / dx
    # Assemble on raw coefficient lists: values may be Polys in a deeper
    # variable, which must land in coefficient slots, not be added as polys.
    cs: list = []
    for i in reversed(range(n)):
        node = rational(nodes[i])
        shifted = [0] + cs
        for j, c in enumerate(cs):
            shifted[j] = shifted[j] - c * node
        cs = shifted
        cs[0] = (cs[0] + newton[i]) if cs else newton[i]
    return Poly(cs, var)


# -- characteristic polynomial ----------------------------------------------


def charpoly_coeffs(matrix: list[list]) -> list:
    """Coefficients c_0..c_dim of det(x I - M), ascending in x.

    Scalar entries: Faddeev-LeVerrier.  Polynomial entries: evaluation at
    rational points of the outermost variable plus exact interpolation
    (determinants always specialize, so no nodes need skipping).
    """
    dim = len(matrix)
    sample = next(
        (e for row in matrix for e in row if isinstance(e, Poly)), None
    )
    if sample is None:
        return _charpoly_scalar(matrix)
    var = sample.var
    maxdeg = max(
        (e.degree() for row in matrix for e in row if isinstance(e, Poly)),
        default=0,
    )
    bound = dim * maxdeg
    nodes, value_lists = [], []
    x = 0
    while len(nodes) <= bound:
        pt = Q(x)
        x = -x if x > 0 else -x + 1
        m = [[e(pt) if isinstance(e, Poly) else e for e in row] for row in matrix]
        nodes.append(pt)
        value_lists.append(charpoly_coeffs(m))
    return [
        lagrange_interpolate(nodes, [vl[k] for vl in value_lists], var)
        for k in range(dim + 1)
    ]


def _charpoly_scalar(matrix: list[list]) -> list:
    # Faddeev-LeVerrier: M_1 = M, c_k = -tr(M_k)/k, M_{k+1} = M (M_k + c_k I).
    n = len(matrix)
    coeffs = [Q(0)] * (n + 1)
    coeffs[n] = Q(1)
    mm = [[rational(e) for e in row] for row in matrix]
    aux = [row[:] for row in mm]
    for k in range(1, n + 1):
        tr = Q(0)
        for i in range(n):
            tr = tr + aux[i][i]
        c = -tr / Q(k)
        coeffs[n - k] = c
        if k < n:
            tmp = [[Q(0)] * n for _ in range(n)]
            for i in range(n):
                row = mm[i]
                for j in range(n):
                    acc = row[j] * c
                    for t in range(n):
                        acc = acc + row[t] * aux[t][j]
                    tmp[i][j] = acc
            aux = tmp
    return coeffs


# -- rational functions ------------------------------------------------------


class RatFunc:
    """Reduced rational function in z; denominator normalized to D(0) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce: bool = True):
        if num.var != den.var:
            raise VariableMismatch(f"{num.var!r} vs {den.var!r}")
        d0 = den.constant_value()
        if _is_zero(d0):
            raise ZeroDivisionError("denominator vanishes at 0")
        if reduce and not num.is_zero():
            g = gcd(num, den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
                d0 = den.constant_value()
        # normalize constant term of the denominator to 1
        num = _scale_by_inverse(num, d0)
        den = _scale_by_inverse(den, d0)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RatFunc is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num}) / ({self.den})"

    def series(self, n_terms: int) -> list:
        """First n_terms Taylor coefficients at z = 0 (exact long division)."""
        dc = self.den.coeffs
        out = []
        for k in range(n_terms):
            acc = self.num.coeff(k)
            for j in range(1, min(k, len(dc) - 1) + 1):
                acc = acc - dc[j] * out[k - j]
            out.append(acc)  # den constant term is 1
        return out


def _scale_by_inverse(f: Poly, d0) -> Poly:
    if isinstance(d0, Poly):
        return f.map_coeffs(
            lambda c: (c if isinstance(c, Poly) else Poly.const(c, d0.var)).exact_div(d0)
        )
    inv = Q(rational(d0).denominator, rational(d0).numerator)
    return f.scale(inv)
