"""Small-rho asymptotics of the zero structures.

Closed-form predictions for where the zero clouds, isolated zeros, and
axis crossings sit as the node reliability rho tends to zero, plus tools
to confront them with computed scatters: a log-log exponent fitter and a
dominant-balance checker that rederives the expansion scale chi from the
bivariate loci.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .families import (K3_CYLINDER_F, K3_CYLINDER_F0, K4_LADDER, FamilyError)
from .poly import Poly
from .rings import Q, rational
from .roots import ZeroSet, aberth_roots


class BalanceError(ValueError):
    """The ansatz exponent admits no two-term leading balance."""


@dataclass(frozen=True)
class AsymptoticModel:
    """prediction(rho) = prefactor * rho**exponent + offset + o(1).

    ``branches`` lists the phase factors multiplying the power term; a
    one-element tuple means a single real prediction.  ``note`` records
    where a decimal-only constant comes from.
    """

    feature: str
    exponent: Fraction
    prefactor: object
    offset: object = 0
    branches: tuple = (1,)
    note: str = ""

    def predict(self, rho):
        rho = float(rho)
        if rho <= 0:
            raise ValueError("asymptotics need 0 < rho")
        scale = self.prefactor * rho ** float(self.exponent)
        vals = [b * scale + self.offset for b in self.branches]
        return vals[0] if len(vals) == 1 else vals


# decimal constants of the f=0 cylinder: the square of the triple-point
# scale a is an algebraic number of degree 10 and the square of the
# crossing scale a' one of degree 17; only their decimal values are kept
TRIPLE_POINT_A = 0.4610389
TRIPLE_POINT_B = -0.08457522
CROSSING_A_PRIME = 0.33529987

_PHASE_PAIR = (complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3)),
               complex(math.cos(2 * math.pi / 3), -math.sin(2 * math.pi / 3)))

MODELS = {
    (K4_LADDER, "isolated-real"): AsymptoticModel(
        "isolated-real", Fraction(-1, 3), -0.5 ** (1 / 3), Fraction(25, 24)),
    (K4_LADDER, "isolated-pair"): AsymptoticModel(
        "isolated-pair", Fraction(-1, 3), -0.5 ** (1 / 3), Fraction(25, 24),
        branches=_PHASE_PAIR,
        note="the real branch continued around rho = 0 in both directions"),
    (K4_LADDER, "circle-radius"): AsymptoticModel(
        "circle-radius", Fraction(-1, 4), 0.5 ** 0.25),
    (K4_LADDER, "circle-center"): AsymptoticModel(
        "circle-center", Fraction(0), 0.0, Fraction(27, 32)),
    (K3_CYLINDER_F0, "circle-radius"): AsymptoticModel(
        "circle-radius", Fraction(-1, 2), (5 - math.sqrt(17)) ** 0.25
        / math.sqrt(2)),
    (K3_CYLINDER_F0, "triple-point"): AsymptoticModel(
        "triple-point", Fraction(-1, 2), TRIPLE_POINT_A, TRIPLE_POINT_B,
        branches=(1j, -1j),
        note="a^2 is algebraic of degree 10; decimal value kept"),
    (K3_CYLINDER_F0, "imaginary-crossing"): AsymptoticModel(
        "imaginary-crossing", Fraction(-1, 2), CROSSING_A_PRIME,
        branches=(1j, -1j),
        note="a'^2 is algebraic of degree 17; decimal value kept"),
    (K3_CYLINDER_F, "circle-radius"): AsymptoticModel(
        "circle-radius", Fraction(-2, 5), 7.0 ** (-1 / 5)),
    (K3_CYLINDER_F, "imaginary-crossing"): AsymptoticModel(
        "imaginary-crossing", Fraction(-1, 3), 10.0 ** (-1 / 6),
        offset=-3 / (5 * math.sqrt(10)), branches=(1j, -1j)),
}


def asymptote(family: str, feature: str, rho):
    """Predicted location/scale of a zero-structure feature at small rho."""
    try:
        model = MODELS[(family, feature)]
    except KeyError:
        known = sorted(f for fam, f in MODELS if fam == family)
        if not known:
            raise FamilyError(f"unknown family {family!r}")
        raise ValueError(
            f"unknown feature {feature!r} for {family}; "
            f"choose from {known}") from None
    return model.predict(rho)


# -- feature selectors -----------------------------------------------------------


def _pair_filtered(roots):
    """Drop members of near-coincident pairs (isolated zeros arrive as
    pairs whose separation vanishes exponentially with n)."""
    out = []
    for i, z in enumerate(roots):
        near = min((abs(z - w) for j, w in enumerate(roots) if j != i),
                   default=None)
        if near is None or near > 1e-4 * (1 + abs(z)):
            out.append(z)
    return out


def select_max_modulus(zeroset: ZeroSet):
    """Outer radius of the zero cloud; tight isolated pairs are excluded
    so they cannot masquerade as the cloud edge."""
    cloud = _pair_filtered(list(zeroset.roots))
    if not cloud:
        raise ValueError("no cloud zeros in scatter")
    return max(cloud, key=abs)


def select_isolated_real(zeroset: ZeroSet):
    """Most negative real zero (the real isolated pair sits far left of
    the cloud at small rho)."""
    reals = [z.real for z in zeroset.roots
             if abs(z.imag) <= 1e-6 * (1 + abs(z))]
    if not reals:
        raise ValueError("no real zeros in scatter")
    return min(reals)


def select_imaginary_crossing(zeroset: ZeroSet):
    """Zero closest to the imaginary axis (smallest |Re|, upper half)."""
    upper = [z for z in zeroset.roots if z.imag > 0]
    if not upper:
        raise ValueError("no upper-half-plane zeros in scatter")
    return min(upper, key=lambda z: abs(z.real))


SELECTORS = {
    "max-modulus": select_max_modulus,
    "isolated-real": select_isolated_real,
    "imaginary-crossing": select_imaginary_crossing,
}


@dataclass(frozen=True)
class FitResult:
    feature: str
    exponent: float
    prefactor: float
    rhos: tuple
    scales: tuple
    residuals: tuple

    def to_json(self) -> str:
        return json.dumps({
            "feature": self.feature,
            "exponent": self.exponent,
            "prefactor": self.prefactor,
            "rhos": [float(r) for r in self.rhos],
            "residuals": [float(r) for r in self.residuals],
        })


def _scatter_rho(zeroset: ZeroSet):
    meta = zeroset.meta or {}
    if "rho" not in meta:
        raise ValueError("scatter carries no rho in its metadata")
    return rational(Q(meta["rho"]))


def fit_exponent(scatters, selector, offset=0) -> FitResult:
    """Least-squares slope of log(feature scale) against log rho.

    ``selector`` is a name from SELECTORS or a callable on a ZeroSet;
    ``offset`` is subtracted from the selected value before taking the
    modulus (features with a finite limit point need their limit removed
    or the fitted slope is polluted at moderate rho).
    """
    if isinstance(selector, str):
        name = selector
        try:
            selector = SELECTORS[selector]
        except KeyError:
            raise ValueError(f"unknown selector {selector!r}; "
                             f"choose from {sorted(SELECTORS)}") from None
    else:
        name = getattr(selector, "__name__", "custom")
    if len(scatters) < 3:
        raise ValueError("need at least 3 scatters to fit an exponent")
    pts = []
    for zs in scatters:
        rho = _scatter_rho(zs)
        value = selector(zs)
        scale = abs(complex(value) - complex(offset))
        if scale == 0:
            raise ValueError(f"feature degenerate at rho={rho}")
        pts.append((math.log(float(rho)), math.log(scale)))
    n = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    resid = tuple(y - (slope * x + intercept) for x, y in pts)
    return FitResult(name, slope, math.exp(intercept),
                     tuple(float(math.exp(x)) for x, _ in pts),
                     tuple(float(math.exp(y)) for _, y in pts), resid)


# -- dominant balance ------------------------------------------------------------


@dataclass(frozen=True)
class BalanceResult:
    """Leading balance of a locus under p = chi * rho**(-e)."""

    equation: Poly          # polynomial in chi
    roots: tuple
    order: Fraction         # the rho-power of the leading terms


def _monomials(locus: Poly):
    """(p-power, rho-power, rational coefficient) triples of a bivariate
    locus given as a Poly in p with Poly-in-rho coefficients (either
    nesting order)."""
    for i, c in enumerate(locus.coeffs):
        if isinstance(c, Poly):
            for j, a in enumerate(c.coeffs):
                if a != 0:
                    if locus.var == "rho" or c.var == "p":
                        yield j, i, rational(a)
                    else:
                        yield i, j, rational(a)
        elif c != 0:
            if locus.var == "rho":
                yield 0, i, rational(c)
            else:
                yield i, 0, rational(c)


def verify_dominant_balance(locus: Poly, exponent) -> BalanceResult:
    """Substitute p = chi * rho**(-exponent) and isolate the lowest-order
    terms in rho; a consistent ansatz leaves at least two distinct chi
    powers in balance, and the chi-equation's roots are the expansion
    prefactors."""
    e = Fraction(exponent)
    orders = {}
    for i, j, coeff in _monomials(locus):
        key = Fraction(j) - e * i
        orders.setdefault(key, {})
        orders[key][i] = orders[key].get(i, Q(0)) + coeff
    # drop chi-power groups that cancelled to zero
    orders = {k: {i: c for i, c in v.items() if c != 0}
              for k, v in orders.items()}
    orders = {k: v for k, v in orders.items() if v}
    if not orders:
        raise BalanceError("locus is identically zero")
    lead = min(orders)
    terms = orders[lead]
    if len(terms) < 2:
        raise BalanceError(
            f"no consistent balance at exponent {e}: leading order "
            f"rho^{lead} holds a single chi power {set(terms)}")
    top = max(terms)
    coeffs = tuple(terms.get(i, Q(0)) for i in range(top + 1))
    eq = Poly(coeffs, "chi")
    roots = tuple(r for r in aberth_roots(eq, 128) if abs(r) > mpf(2) ** -32)
    return BalanceResult(eq, roots, lead)
