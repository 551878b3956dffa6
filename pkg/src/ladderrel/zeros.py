"""Complex-zero structure of the reliability polynomials.

High-precision root scatters, the algebraic loci that organize them
(curve endpoints from double roots of the generating-function denominator,
curve points from opposite roots, isolated accumulation points from
common numerator/denominator roots), eigenvalue dominance classification,
and the critical node-reliability values where the structure changes shape
-- determined exactly by resultant elimination where the degrees stay
manageable and by predicate bisection elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import math

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .families import (K3_CYLINDER_F, K3_CYLINDER_F0, K4_ALL_TERMINAL,
                       K4_LADDER, CellParams, FamilyError)
from .genfunc import (DEFAULT_DESTINATION, allterminal_gf_parts, builtin_gf,
                      gf_from_transfer, k3_f0_gf_factors, k3_f_gf_factors,
                      k4_gf_parts)
from .poly import (Poly, eval_var, gcd, primitive, proportional, resultant,
                   squarefree_decomposition, squarefree_part, swap_nested)
from .rings import Q, rational
from .roots import ZeroSet, aberth_roots, aberth_roots_numeric, to_mpc, to_mpf
from .transfer import cell_matrix, reliability_polynomial

#: marker accepted by the locus functions to keep the node reliability as a
#: second polynomial variable instead of a number
SYMBOLIC = "symbolic"

_SYMBOLIC_RHO = Poly.const(Poly.x("rho"), "p")


def _pr(*cols) -> Poly:
    """Poly in p whose coefficients are ints or ascending rho-tuples."""
    cs = []
    for c in cols:
        if isinstance(c, tuple):
            cs.append(Poly.from_ints(list(c), "rho"))
        else:
            cs.append(Q(c))
    return Poly(cs, "p")


# -- transcribed closed-form loci ----------------------------------------------

#: ladder family: vanishing-residue constraint linking p and the node
#: reliability; its dominance-valid roots are the isolated zeros
ISOLATED_CONSTRAINT_LADDER = _pr(
    (2, 2), (0, 4, 12), (0, -11, -40), (0, 4, 45), (0, 0, -20), (0, 0, 3))

#: ladder family: opposite-root constraint (eigenvalue phase angle pi),
#: quadratic in the node reliability
OPPOSITE_CONSTRAINT_LADDER = _pr(
    4, (-14, 8), (8, -46, 4), (0, 130, 18), (0, -153, -130),
    (0, 80, 249), (0, -16, -232), (0, 0, 119), (0, 0, -33), (0, 0, 4))

#: cylinder family with the diagonal edge present: vanishing-residue
#: constraint, cubic in the node reliability (the general elimination at
#: symbolic node reliability is transcribed, not re-derived; the derived
#: route is exercised at rational node reliabilities)
ISOLATED_CONSTRAINT_CYLINDER = _pr(
    -2, (-6, -1), (28, -39, 12), (-16, 172, 42, 27), (0, -316, -416, -45),
    (0, 230, 947, 33), (0, -56, -899, -90), (0, 0, 382, 135),
    (0, 0, -60, -77), (0, 0, 0, 15))

#: ladder family: defining polynomial of the node reliability below which
#: the third (real) isolated zero exists
CRITICAL_RHO_LADDER = Poly.from_ints(
    [-32768, -198656, 3990544, -12843528, 16258037, -6757568, -2015436,
     -575540, 4636356, -3082436, 624640], "rho")

#: ladder family: defining polynomial of the associated critical p
CRITICAL_P_LADDER = Poly.from_ints(
    [40, -364, 1064, -700, -1946, 4296, -3465, 1074, 146, -176, 32], "p")


# -- generating-function access -------------------------------------------------


def _rho_key(rho):
    r = rational(rho)
    return (int(r.numerator), int(r.denominator))


@lru_cache(maxsize=32)
def _parts_cached(family: str, rho_key) -> tuple[Poly, Poly]:
    rho = Q(*rho_key)
    if family == K4_LADDER:
        _, num, den = k4_gf_parts(rho)
        return num, den
    if family == K4_ALL_TERMINAL:
        return allterminal_gf_parts()
    if rho == 1:
        if family == K3_CYLINDER_F0:
            num, d1, d2 = k3_f0_gf_factors()
            return num, d1 * d2
        if family == K3_CYLINDER_F:
            num, d1, d2 = k3_f_gf_factors()
            return num, d1 * d2
        raise FamilyError(f"unknown family {family!r}")
    gf = gf_from_transfer(family, rho)
    return gf.num, gf.den


def gf_parts(family: str, rho=Q(1)) -> tuple[Poly, Poly]:
    """(numerator, denominator) of the pole part of the generating function,
    as z-polynomials over Q[p] (over Q[p][rho] when rho is SYMBOLIC)."""
    if rho == SYMBOLIC:
        if family != K4_LADDER:
            raise FamilyError(
                "symbolic node reliability is kept exact only for the "
                "ladder family; use rational values elsewhere")
        _, num, den = k4_gf_parts(_SYMBOLIC_RHO)
        return num, den
    return _parts_cached(family, _rho_key(rho))


# -- zero scatters ---------------------------------------------------------------


def zero_scatter(family: str, n: int, rho=Q(1),
                 precision: int | None = None) -> ZeroSet:
    """All complex zeros of the n-cell reliability polynomial in p."""
    if n < 1:
        raise ValueError("need at least one cell")
    rho = rational(rho)
    poly = reliability_polynomial(family, n, rho,
                                  DEFAULT_DESTINATION[family])
    meta = {"family": family, "n": n, "rho": f"{rho.numerator}/{rho.denominator}",
            "precision": precision or (64 + 4 * poly.degree())}
    warm = None
    if n >= 16:
        try:
            warm = _scatter_warm(family, n, rho, poly.degree())
        except Exception:
            warm = None
    return aberth_roots(poly, precision, meta=meta, warm=warm)


def _balance_phase(family: str, n: int, rho, p: complex):
    """n*log(lam1/lam2) - log(w2/w1) for the two dominant contributing
    eigenvalues at p.  The n-cell polynomial is sum_k w_k lam_k^n, so its
    zeros sit where this value is an odd multiple of i*pi; everything is
    double precision, good enough for warm starts."""
    lam, w = _eig_residues(family, complex(p), float(rho))
    if w is None:
        return None
    lam = np.asarray(lam)
    w = np.asarray(w)
    wscale = np.max(np.abs(w))
    lscale = np.max(np.abs(lam))
    if wscale == 0.0 or lscale == 0.0:
        return None
    keep = (np.abs(w) > 1e-10 * wscale) & (np.abs(lam) > 1e-12 * lscale)
    if np.count_nonzero(keep) < 2:
        return None
    lam, w = lam[keep], w[keep]
    order = np.argsort(-np.abs(lam))
    l1, l2 = lam[order[0]], lam[order[1]]
    w1, w2 = w[order[0]], w[order[1]]
    if w1 == 0 or w2 == 0 or l2 == 0:
        return None
    return n * (np.log(l1) - np.log(l2)) - (np.log(w2) - np.log(w1))


def _phase_slope(family: str, n: int, rho, p: complex):
    """Derivative of the balance phase by central difference; the imaginary
    part of the difference is wrapped so principal-log branch jumps between
    the two evaluation points cancel out."""
    d = 1e-7 * (1 + abs(p))
    ga = _balance_phase(family, n, rho, p + d)
    gb = _balance_phase(family, n, rho, p - d)
    if ga is None or gb is None:
        return None
    diff = ga - gb
    diff = complex(diff.real, math.remainder(diff.imag, 2 * math.pi))
    der = diff / (2 * d)
    return der if der != 0 else None


def _warm_newton(family: str, n: int, rho, p0: complex):
    """Newton iteration onto the nearest zero of the n-cell polynomial
    (balance phase = i*pi mod 2*pi*i).  Returns the root or None."""
    p = complex(p0)
    for _ in range(16):
        g = _balance_phase(family, n, rho, p)
        if g is None:
            return None
        r = complex(g.real, math.remainder(g.imag - math.pi, 2 * math.pi))
        if abs(r) < 1e-9:
            return p
        der = _phase_slope(family, n, rho, p)
        if der is None:
            return None
        step = r / der
        cap = 0.3 * (1 + abs(p))
        if abs(step) > cap:
            step *= cap / abs(step)
        p -= step
    return None


def _scatter_warm(family: str, n: int, rho, deg: int) -> list:
    """Warm-start estimates for the n-cell zero scatter.

    Zeros of a long chain lie where the two dominant transfer eigenvalues
    balance; walking that curve by stepping the balance phase 2*pi at a
    time visits the zeros in order.  Seeded from an exact scatter of a
    short chain (same curve, coarser spacing) so every arc gets visited;
    gaps left near arc junctions, where more than two eigenvalues compete,
    are cheap for the refiner to fill."""
    n0 = 10
    seeds = [complex(r) for r in aberth_roots(
        reliability_polynomial(family, n0, rho, DEFAULT_DESTINATION[family]),
        160).roots if r != 0]
    found: list = []

    def register(p: complex) -> bool:
        if any(abs(p - q) < 1e-6 * (1 + abs(p)) for q in found):
            return False
        found.append(p)
        return True

    for s in seeds:
        p = _warm_newton(family, n, rho, s)
        if p is None:
            continue
        fresh = register(p)
        if not fresh:
            continue
        for sign in (1.0, -1.0):
            q = p
            while len(found) < deg + 8:
                der = _phase_slope(family, n, rho, q)
                if der is None:
                    break
                start = q + sign * 2j * math.pi / der
                q2 = _warm_newton(family, n, rho, start)
                if q2 is None or not register(q2):
                    break
                q = q2
    return found


def zeroset_csv(zs: ZeroSet) -> str:
    lines = ["re,im"]
    for r in zs.roots:
        lines.append(f"{format_real(r.real)},{format_real(r.imag)}")
    return "\n".join(lines) + "\n"


def zeroset_json(zs: ZeroSet) -> dict:
    return {
        "meta": dict(zs.meta),
        "precision": zs.precision,
        "degree": zs.degree,
        "roots": [[format_real(r.real), format_real(r.imag)] for r in zs.roots],
        "residuals": [format_real(r) for r in zs.residuals],
    }


def format_real(x) -> str:
    """Deterministic 20-significant-digit decimal rendering."""
    return mpmath.nstr(mpf(x), 20)


# -- eliminants -------------------------------------------------------------------


def _strip_eliminant(f: Poly) -> Poly:
    """Squarefree primitive part: repeated factors collapsed, constant
    (parameter-free) content dropped."""
    return primitive(squarefree_part(primitive(f)))


def eliminant_factors(f: Poly) -> tuple[Poly, ...]:
    """Distinct factors of an eliminant, constants dropped.

    Univariate rational-coefficient input is split into irreducible factors
    (via sympy's integer factorization); nested input falls back to
    squarefree multiplicity classes."""
    f = primitive(f)
    if any(isinstance(c, Poly) for c in f.coeffs):
        return tuple(fac for fac, _ in squarefree_decomposition(f)
                     if fac.degree() >= 1)
    return _factor_rational_poly(f)


def _factor_rational_poly(f: Poly) -> tuple[Poly, ...]:
    import sympy

    from .roots import _integer_coeffs

    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed(_integer_coeffs(f))), x)
    out = []
    for fac, _ in sp.factor_list()[1]:
        cs = [Q(int(c)) for c in reversed(fac.all_coeffs())]
        p = Poly(cs, f.var)
        if p.degree() >= 1:
            out.append(primitive(p))
    return tuple(out)


def double_root_eliminant(den: Poly) -> Poly:
    """Eliminate z from den(z) = 0 and den'(z) = 0."""
    r = resultant(den, den.derivative())
    if isinstance(r, Poly):
        if r.is_zero():
            raise ValueError("denominator has a repeated factor identically")
        return _strip_eliminant(r)
    if r == 0:
        raise ValueError("denominator has a repeated factor identically")
    return r


def opposite_root_eliminant(den: Poly) -> Poly:
    """Eliminate Z = z^2 from the even/odd split den(z) = E(Z) + z O(Z)."""
    even = Poly(den.coeffs[0::2], "Z")
    odd = Poly(den.coeffs[1::2], "Z")
    if odd.is_zero() or even.is_zero():
        # every root comes with its opposite; no constraint on the parameters
        return Poly([], "p")
    if even.degree() == 0 and odd.degree() == 0:
        return Poly([], "p")
    r = resultant(even, odd)
    if isinstance(r, Poly):
        if r.is_zero():
            raise ValueError("denominator factors through z -> -z identically")
        return _strip_eliminant(r)
    return r


def common_root_eliminant(num: Poly, den: Poly) -> Poly:
    """Eliminate z from num(z) = 0 and den(z) = 0 (vanishing residue).

    Parameter values where a leading z-coefficient vanishes enter the
    resultant spuriously (the degree drops there, no root escapes to
    infinity through a shared one); factors dividing the leading
    coefficients are removed."""
    r = resultant(num, den)
    if not isinstance(r, Poly):
        return r
    if r.is_zero():
        raise ValueError("numerator and denominator share a factor")
    out = _strip_eliminant(r)
    for lead in (num.lc(), den.lc()):
        if isinstance(lead, Poly) and lead.degree() >= 1:
            g = gcd(out, primitive(lead))
            if isinstance(g, Poly) and g.degree() >= 1:
                out = out.exact_div(g)
    return primitive(out)


def double_root_locus(family: str, rho=Q(1)) -> Poly:
    """Locus in p of curve endpoints: the denominator has a double root."""
    return double_root_eliminant(gf_parts(family, rho)[1])


def opposite_root_locus(family: str, rho=Q(1)) -> Poly:
    """Locus in p where the denominator has a pair of opposite roots."""
    return opposite_root_eliminant(gf_parts(family, rho)[1])


def isolated_zero_locus(family: str, rho=Q(1)) -> Poly:
    """Locus in p of candidate isolated zeros: numerator and denominator
    share a root (the residue at that pole vanishes).  Roots are true
    isolated accumulation points only when the shared root is dominant;
    see dominant_root_classify."""
    if rho == SYMBOLIC and family == K3_CYLINDER_F:
        return ISOLATED_CONSTRAINT_CYLINDER
    num, den = gf_parts(family, rho)
    return common_root_eliminant(num, den)


# -- the general phase-angle constraint (cubic-denominator family) ---------------


@dataclass(frozen=True)
class CurveConstraint:
    """Polynomial constraint linking p, the node reliability, and the
    cosine T of the phase angle between two equal-modulus eigenvalues.
    Points of the limiting curves satisfy it (with the extra, non-algebraic
    condition that the tied modulus is the largest)."""

    family: str
    poly: Poly
    symbolic_rho: bool

    def at(self, rho=None, t=None) -> Poly:
        out = self.poly
        if t is not None:
            out = eval_var(out, "T", rational(t))
        if rho is not None:
            if not self.symbolic_rho:
                raise ValueError("constraint was built at fixed node reliability")
            out = eval_var(out, "rho", rational(rho))
        return out


def curve_constraint(family: str = K4_LADDER, rho=SYMBOLIC) -> CurveConstraint:
    """Eliminate the eigenvalue w between the denominator's degree-3
    eigenvalue polynomial and the equal-modulus condition.

    If x, y are the tied eigenvalues with ratio e^{i theta} and w the third,
    then x + y = -(b1 + w), xy = b2 + b1 w + w^2 and the tie condition
    (x + y)^2 = 2 (1 + T) xy holds with T = cos(theta).  Only the
    degree-3 case is kept exact; the wider families are classified
    numerically (dominant_root_classify)."""
    den = gf_parts(family, rho)[1]
    if den.degree() != 3:
        raise FamilyError(
            "exact phase-angle elimination requires a cubic denominator")
    symbolic = rho == SYMBOLIC
    b1, b2, b3 = den.coeff(1), den.coeff(2), den.coeff(3)
    t_inner = Poly.x("T")
    if symbolic:
        t_inner = Poly.const(t_inner, "rho")
    t = Poly.const(t_inner, "p")
    cubic = Poly([b3, b2, b1, Q(1)], "w")
    pair_sum = Poly([b1, Q(1)], "w")            # -(x + y)
    pair_prod = Poly([b2, b1, Q(1)], "w")       # xy
    tie = pair_sum * pair_sum - pair_prod.scale(2 * (1 + t))
    c = resultant(cubic, tie)
    return CurveConstraint(family, primitive(c), symbolic)


# -- dominance classification ------------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    """Eigenvalues of the transfer recursion at a fixed (p, rho), sorted by
    decreasing modulus, with tie and vanishing-residue flags."""

    eigenvalues: tuple
    dominant: tuple
    tie: bool
    shared_root: object          # z-plane location of a common num/den root
    shared_root_dominant: bool   # the isolated-zero validity test
    precision: int


def _eval_numeric(c, x):
    """Evaluate a Q scalar or a univariate Q-coefficient Poly at numeric x."""
    if isinstance(c, Poly):
        acc = mpc(0)
        for a in reversed(c.coeffs):
            acc = acc * x + to_mpc(a)
        return acc
    return to_mpc(c)


def _z_coeffs_at(zpoly: Poly, p) -> list:
    return [_eval_numeric(c, p) for c in zpoly.coeffs]


def dominant_root_classify(family: str, p, rho=Q(1),
                           precision: int = 128) -> DominanceReport:
    """Classify the denominator roots at a point of the complex p-plane.

    Eigenvalues are the reciprocals of the denominator's z-roots; a
    relative modulus gap below 2^(-precision/4) counts as a tie.  The
    shared-root flag reports whether a common numerator/denominator root
    attains the dominant modulus, which is the validity test for isolated
    zeros."""
    num, den = gf_parts(family, rational(rho))
    with mp.workprec(precision + 20):
        pval = to_mpc(p)
        dcoeffs = _z_coeffs_at(den, pval)
        droots = aberth_roots_numeric(dcoeffs, precision)
        if any(abs(z) == 0 for z in droots):
            raise FamilyError("denominator vanishes at z = 0")
        eigs = sorted((1 / z for z in droots), key=lambda e: -abs(e))
        tol = mpf(2) ** (-(precision // 4))
        top = abs(eigs[0])
        dominant = tuple(e for e in eigs if abs(e) >= top * (1 - tol))
        shared = None
        shared_dominant = False
        ncoeffs = _z_coeffs_at(num, pval)
        while ncoeffs and ncoeffs[-1] == 0:
            ncoeffs.pop()
        if len(ncoeffs) >= 2:
            nroots = aberth_roots_numeric(ncoeffs, precision)
            best = None
            for zd in droots:
                gap = min(abs(zn - zd) for zn in nroots) / (1 + abs(zd))
                if gap <= tol and (best is None or gap < best[0]):
                    best = (gap, zd)
            if best is not None:
                shared = best[1]
                # a multiple pole only partially cancelled by the numerator
                # survives as a pole, so it cannot give an isolated zero
                near = tol * (1 + abs(shared))
                dmult = sum(1 for z in droots if abs(z - shared) <= near)
                nmult = sum(1 for z in nroots if abs(z - shared) <= near)
                shared_dominant = (nmult >= dmult
                                   and abs(1 / shared) >= top * (1 - tol))
        return DominanceReport(tuple(eigs), dominant, len(dominant) > 1,
                               shared, shared_dominant, precision)


# -- exact critical values -----------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    rho: object
    p: object
    rho_factor: Poly
    p_factor: Poly


def _real_roots(factor: Poly, precision: int) -> list:
    out = []
    tol = mpf(2) ** (-(precision // 4))
    for r in aberth_roots(factor, precision):
        if abs(r.imag) <= tol * (1 + abs(r.real)):
            out.append(r.real)
    return out


def _rel_eval(nested: Poly, p, rho) -> mpf:
    """|locus(p, rho)| scaled by the coefficient norm and root magnitudes."""
    coeffs = [_eval_numeric(c, rho) for c in nested.coeffs]
    acc = mpc(0)
    for a in reversed(coeffs):
        acc = acc * p + a
    norm = max(abs(a) for a in coeffs)
    deg = nested.degree()
    return abs(acc) / (norm * max(mpf(1), abs(p)) ** deg)


def _match_factor(factors, value) -> Poly:
    best = None
    for f in factors:
        coeffs = [to_mpc(c) for c in f.coeffs]
        acc = mpc(0)
        for a in reversed(coeffs):
            acc = acc * value + a
        score = abs(acc) / max(abs(a) for a in coeffs)
        if best is None or score < best[0]:
            best = (score, f)
    return best[1]


def critical_rho_exact(locus_a: Poly, locus_b: Poly,
                       precision: int = 192) -> list[CriticalPoint]:
    """Common solutions of two bivariate loci in (p, rho).

    p is eliminated by a resultant to get the defining polynomial of the
    critical node reliabilities, rho likewise for the critical p's; the
    candidate pairs are then matched numerically against both loci.  Every
    reported point carries the squarefree factors it solves."""
    res_rho = resultant(locus_a, locus_b)
    if not isinstance(res_rho, Poly) or res_rho.is_zero():
        if res_rho == 0 or (isinstance(res_rho, Poly) and res_rho.is_zero()):
            raise ValueError("loci share a component; resultant vanishes")
        raise ValueError("loci have no parameter dependence to eliminate")
    res_p = resultant(swap_nested(locus_a), swap_nested(locus_b))
    if not isinstance(res_p, Poly) or res_p.is_zero():
        raise ValueError("loci share a component; resultant vanishes")

    rho_factors = eliminant_factors(res_rho)
    p_factors = eliminant_factors(res_p)
    tol = mpf(2) ** (-(precision // 4))
    points = []
    with mp.workprec(precision + 20):
        for rf in rho_factors:
            for rho_c in _real_roots(rf, precision):
                # roots of locus_a at this rho, checked against locus_b
                acoeffs = [_eval_numeric(c, rho_c) for c in locus_a.coeffs]
                while acoeffs and acoeffs[-1] == 0:
                    acoeffs.pop()
                if len(acoeffs) < 2:
                    continue
                for p_c in aberth_roots_numeric(acoeffs, precision):
                    if _rel_eval(locus_b, p_c, rho_c) > tol:
                        continue
                    dup = any(abs(q.rho - rho_c) <= tol * (1 + abs(rho_c))
                              and abs(q.p - p_c) <= tol * (1 + abs(p_c))
                              for q in points)
                    if not dup:
                        points.append(CriticalPoint(
                            rho_c, p_c, rf, _match_factor(p_factors, p_c)))
    return points


# -- numeric critical values ----------------------------------------------------------


def critical_rho_bisect(family: str, predicate, bracket,
                        tol=Q(1, 10 ** 6)) -> Q:
    """Bisection on a boolean structural predicate of the node reliability.

    The predicate must flip exactly once on the bracket; equal endpoint
    values are rejected.  Midpoints stay rational so every evaluation is
    exact-input."""
    lo, hi = rational(bracket[0]), rational(bracket[1])
    tol = rational(tol)
    vlo = predicate(lo)
    vhi = predicate(hi)
    if vlo == vhi:
        raise ValueError("predicate does not change over the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if predicate(mid) == vlo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def isolated_points(family: str, rho, precision: int = 160) -> list:
    """Roots of the vanishing-residue constraint at this node reliability,
    each classified for dominance validity.  Returns (p, valid) pairs."""
    rho = rational(rho)
    if family == K4_LADDER:
        locus = eval_var(ISOLATED_CONSTRAINT_LADDER, "rho", rho)
    elif family == K3_CYLINDER_F:
        locus = eval_var(ISOLATED_CONSTRAINT_CYLINDER, "rho", rho)
    else:
        locus = isolated_zero_locus(family, rho)
    if locus.degree() < 1:
        return []
    out = []
    for r in aberth_roots(locus, precision):
        report = dominant_root_classify(family, r, rho, precision)
        out.append((r, report.shared_root_dominant))
    return out


def isolated_count_predicate(family: str, count: int, precision: int = 96):
    """True when at least `count` vanishing-residue roots are dominance-valid."""

    def predicate(rho):
        pts = isolated_points(family, rho, precision)
        return sum(1 for _, valid in pts if valid) >= count

    return predicate


def _dominant_nonreal(roots, tol_exp: int = 20) -> bool:
    tol = mpf(2) ** (-tol_exp)
    zmin = min(roots, key=abs)
    for z in roots:
        if abs(z) <= abs(zmin) * (1 + tol) and abs(z.imag) > tol * (1 + abs(z)):
            return True
    return False


def _eig_residues(family: str, p, rho):
    """Eigenvalues of the inner-cell transfer matrix at numeric (p, rho)
    together with each one's residue weight in the generating function
    (projection of the boundary vector onto the eigenbasis times the
    destination component).  Returns (eigenvalues, weights); weights is
    None when the eigenbasis is too ill-conditioned to resolve."""
    if family in (K4_LADDER, K4_ALL_TERMINAL):
        inner = CellParams(a=p, b=p, c=p, d=p, e=p, S=rho, T=rho)
        cell0 = CellParams(a=1.0, b=p, c=0.0, d=0.0, e=0.0, S=rho, T=rho)
    else:
        f = 0.0 if family == K3_CYLINDER_F0 else p
        inner = CellParams(a=p, b=p, c=p, d=p, e=p, f=f,
                           S=rho, T=rho, U=rho)
        cell0 = CellParams(a=1.0, b=p, c=0.0, d=p, e=0.0, f=f,
                           S=rho, T=rho, U=rho)
    dtype = complex if isinstance(p, complex) else float
    mat = np.array(cell_matrix(family, inner), dtype=dtype)
    boundary = np.array(cell_matrix(family, cell0), dtype=dtype)[:, 0]
    lam, vecs = np.linalg.eig(mat)
    try:
        comps = np.linalg.solve(vecs, boundary)
    except np.linalg.LinAlgError:
        return lam, None
    weights = vecs[0] * comps
    if not np.all(np.isfinite(weights)):
        return lam, None
    return lam, weights


def _float_eigs(family: str, p: float, rho: float):
    """Eigenvalues at numeric (p, rho) that actually appear in the
    generating function.

    Alias states make the raw matrix carry extra eigenvalues whose residue
    in the generating function is exactly zero; keeping them would corrupt
    dominance classification, so zero-residue ones are dropped."""
    lam, weights = _eig_residues(family, p, rho)
    if weights is None:
        return lam
    scale = np.max(np.abs(weights))
    if scale == 0.0:
        return lam
    return lam[np.abs(weights) > 1e-8 * scale]


def real_segment_window(family: str, rho, p_range, grid: int = 160):
    """Real-axis interval of p over which the dominant eigenvalues form a
    complex-conjugate pair (zeros then accumulate on the real axis).
    Returns (lo, hi) or None."""
    rho = rational(rho)
    rf = float(rho)
    lo, hi = rational(p_range[0]), rational(p_range[1])
    step = (hi - lo) / grid
    tol = 1e-7

    def probe(pq) -> bool:
        lam = _float_eigs(family, float(pq), rf)
        lam = lam[np.abs(lam) > 1e-12]
        if lam.size == 0:
            return False
        m = np.max(np.abs(lam))
        cluster = lam[np.abs(lam) >= m * (1 - tol)]
        return bool(np.any(np.abs(cluster.imag) > tol * (1 + np.abs(cluster))))

    hits = [k for k in range(grid + 1) if probe(lo + k * step)]
    if not hits:
        return None

    def edge(inside_q, outside_q):
        a, b = inside_q, outside_q
        for _ in range(24):
            mid = (a + b) / 2
            if probe(mid):
                a = mid
            else:
                b = mid
        return (a + b) / 2

    first = lo + hits[0] * step
    last = lo + hits[-1] * step
    wlo = first if hits[0] == 0 else edge(first, first - step)
    whi = last if hits[-1] == grid else edge(last, last + step)
    return (wlo, whi)


class SegmentProbe:
    """Bisection predicate for the existence of a real-axis segment.

    Rescans a window around the last place the segment was seen, so the
    grid resolution keeps up as the segment shrinks toward the critical
    node reliability."""

    def __init__(self, family: str, p_range=(Q(11, 20), Q(8)),
                 grid: int = 160, first_grid: int = 480):
        self.family = family
        self.p_range = (rational(p_range[0]), rational(p_range[1]))
        self.grid = grid
        self.first_grid = first_grid
        self.window = None

    def scan_range(self):
        if self.window is None:
            return self.p_range
        lo, hi = self.window
        center = (lo + hi) / 2
        # keep the shrinking segment ~25 grid cells wide; a fixed floor
        # would lose it once it narrows below one grid step
        half = max((hi - lo) * 3, Q(1, 10**6))
        return (max(self.p_range[0], center - half),
                min(self.p_range[1], center + half))

    def __call__(self, rho) -> bool:
        if self.window is None:
            w = real_segment_window(self.family, rho, self.p_range,
                                    self.first_grid)
        else:
            rng = self.scan_range()
            w = real_segment_window(self.family, rho, rng, self.grid)
            if w is None:
                # the segment can shrink by orders of magnitude between
                # consecutive hits; rescan finely before trusting a miss
                width = self.window[1] - self.window[0]
                span = rng[1] - rng[0]
                fine = min(100000, max(self.grid, int(span * 2000 / width) + 1))
                w = real_segment_window(self.family, rho, rng, fine)
        if w is not None:
            self.window = w
        return w is not None
