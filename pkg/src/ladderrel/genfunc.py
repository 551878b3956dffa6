"""Generating functions G(z) = sum_n R_n z^n for the uniform families.

Two routes are provided and cross-checked: the published closed-form
rational functions (transcribed below), and derivation from the transfer
matrix (denominator = reversed characteristic polynomial, numerator matched
from the first series terms).  Coefficients live in Q[p]; z is the outer
variable.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, sqrt as mp_sqrt, log as mp_log

from .families import (
    K3_CYLINDER_F,
    K3_CYLINDER_F0,
    K4_ALL_TERMINAL,
    K4_LADDER,
    FamilyError,
)
from .poly import Poly, RatFunc
from .rings import Q, rational
from .transfer import DIMENSION, cell_matrix, transfer_vector, uniform_spec_symbolic
from . import transfer as _transfer

_P = lambda *ints: Poly.from_ints(list(ints), "p")  # ascending coefficients
_p = Poly.x("p")


def _zpoly(*coeffs) -> Poly:
    """z-polynomial with Q[p] coefficients (ascending)."""
    return Poly(tuple(coeffs), "z")


DEFAULT_DESTINATION = {
    K4_LADDER: "S",
    K3_CYLINDER_F0: "U",
    K3_CYLINDER_F: "U",
    K4_ALL_TERMINAL: None,
}


# -- transcribed closed forms --------------------------------------------------


def k4_gf_parts(rho) -> tuple[Poly, Poly, Poly]:
    """(constant part * D, N, D) for the K4 ladder at any rational rho;
    the generating function is const + N/D.

    rho may be a Poly (nested coefficient ring) to keep the node
    reliability symbolic."""
    r = rho if isinstance(rho, Poly) else rational(rho)
    one = Q(1)
    const = Q(1, 2) * r * (1 - _p * r)

    n0 = Q(1, 2) * r * (1 + _p * r)
    n1 = Q(-1, 2) * _p ** 2 * r ** 3 * (_P(2, -10, 13, -4) - _p ** 3 * r)
    n2 = (1 - _p) ** 2 * _p ** 5 * _P(2, -4, 1) * (one - r) * r ** 5

    d1 = -(_p * r) * (2 + _p * r * _P(4, -14, 13, -4))
    d2 = 2 * (1 - _p) * _p ** 3 * r ** 3 * (_P(2, -7, 4) + _p ** 2 * r * _P(7, -10, 5, -1))
    d3 = -4 * _P(2, -1) * (1 - _p) ** 3 * _p ** 6 * (one - r) * r ** 5

    N = _zpoly(n0, n1, n2)
    D = _zpoly(Poly.const(Q(1), "p"), d1, d2, d3)
    return const, N, D


def k3_f0_gf_factors() -> tuple[Poly, Poly, Poly]:
    """(N, D1, D2) for the K3 cylinder with the diagonal edge absent,
    destination U, perfect nodes."""
    u = 1 - _p
    N = _zpoly(
        _p ** 2,
        -u * _p ** 4 * _P(3, 3, -4),
        u ** 3 * _p ** 6 * _P(2, 11, -3, -2),
        u ** 3 * _p ** 8 * _P(2, -4, 3, 11, -13, 3),
        -(u ** 4) * _p ** 10 * _P(3, 6, -12, 10, -10, 4),
        u ** 6 * _p ** 12 * _P(1, 8, -1, -5, -1, 1),
        -(u ** 8) * _p ** 15 * _P(2, 5, -4),
        u ** 10 * _p ** 18,
    )
    D1 = _zpoly(
        Poly.const(Q(1), "p"),
        -(1 - _p ** 2) * _p * _P(1, 1, -1),
        u ** 2 * _p ** 3 * _P(1, 1, 1, -2),
        -(u ** 4) * _p ** 6,
    )
    D2 = _zpoly(
        Poly.const(Q(1), "p"),
        -_p * _P(2, 2, 1, -9, 5),
        u * _p ** 2 * _P(1, 5, 5, -6, -15, 13, 1, -2),
        -(u ** 2) * _p ** 4 * _P(2, 6, 6, -26, 17, -18, 27, -16, 3),
        u ** 4 * _p ** 6 * _P(1, 6, 4, -1, -17, 9, 3, -2),
        -(u ** 6) * _p ** 9 * _P(2, 4, 1, -7, 3),
        u ** 8 * _p ** 12,
    )
    return N, D1, D2


def k3_f_gf_factors() -> tuple[Poly, Poly, Poly]:
    """(N, D1, D2) for the K3 cylinder with all diagonal edges present,
    destination U, perfect nodes."""
    u = 1 - _p
    N = _zpoly(
        _p * _P(1, 1, -1),
        -_P(2, -1) * u ** 2 * _p ** 3 * (1 + _p) * _P(1, 3, -3),
        u ** 5 * _p ** 5 * _P(1, 10, 8, -5, -2),
        -(u ** 6) * _p ** 8 * _P(3, 8, -25, 9, 4, -1),
        u ** 8 * _p ** 11 * _P(1, -2) * _P(3, 3, -7, 2),
        -(u ** 11) * _p ** 14 * _P(1, -3, 1),
    )
    D1 = _zpoly(
        Poly.const(Q(1), "p"),
        -(u ** 2) * _p * (1 + _p) * _P(1, 1, -1),
        u ** 4 * _p ** 3 * _P(1, 1, 1, -2),
        -(u ** 7) * _p ** 6,
    )
    D2 = _zpoly(
        Poly.const(Q(1), "p"),
        -_p * _P(1, 3, 4, -23, 23, -7),
        u ** 2 * _p ** 3 * _P(1, 6, 2, -9, -8, 16, -6),
        -(u ** 4) * _p ** 6 * _P(2, 4, 1, -15, 12, -3),
        u ** 7 * _p ** 9,
    )
    return N, D1, D2


def allterminal_gf_parts() -> tuple[Poly, Poly]:
    """(N, D) for the all-terminal K4 ladder (nodes perfect by definition)."""
    N = _zpoly(_p, _p ** 3 * (1 - _p) * _P(4, -3))
    D = _zpoly(
        Poly.const(Q(1), "p"),
        -(_p ** 2) * _P(12, -26, 21, -6),
        2 * _p ** 5 * (1 - _p) ** 3 * _P(2, -1),
    )
    return N, D


def builtin_gf(family: str, rho=Q(1)) -> RatFunc:
    """The published generating function as a reduced rational function."""
    rho = rational(rho)
    if family == K4_LADDER:
        const, N, D = k4_gf_parts(rho)
        return RatFunc(Poly.const(const, "z") * D + N, D)
    if rho != 1:
        raise FamilyError(
            "only the perfect-node generating function is published for "
            f"{family}; use gf_from_transfer for other node reliabilities")
    if family == K3_CYLINDER_F0:
        N, D1, D2 = k3_f0_gf_factors()
        return RatFunc(N, D1 * D2)
    if family == K3_CYLINDER_F:
        N, D1, D2 = k3_f_gf_factors()
        return RatFunc(N, D1 * D2)
    if family == K4_ALL_TERMINAL:
        N, D = allterminal_gf_parts()
        return RatFunc(N, D)
    raise FamilyError(f"unknown family {family!r}")


def denominator_factors(family: str, rho=Q(1)) -> tuple[Poly, ...]:
    """The denominator's published factorization (single factor when none
    is printed)."""
    rho = rational(rho)
    if family == K4_LADDER:
        return (k4_gf_parts(rho)[2],)
    if rho != 1:
        return (gf_from_transfer(family, rho).den,)
    if family == K3_CYLINDER_F0:
        _, D1, D2 = k3_f0_gf_factors()
        return (D1, D2)
    if family == K3_CYLINDER_F:
        _, D1, D2 = k3_f_gf_factors()
        return (D1, D2)
    if family == K4_ALL_TERMINAL:
        return (allterminal_gf_parts()[1],)
    raise FamilyError(f"unknown family {family!r}")


# -- derivation from the transfer matrix ---------------------------------------


def reliability_series(family: str, n_terms: int, rho=Q(1),
                       destination: str | None = None) -> list:
    """R_0 .. R_{n_terms-1} as Q[p] polynomials, by iterated matrix-vector
    products."""
    from .poly import charpoly_coeffs  # local import keeps module load light

    destination = destination or DEFAULT_DESTINATION[family]
    p = Poly.x("p")
    spec0 = uniform_spec_symbolic(family, 0, p, rational(rho), destination)
    dim = DIMENSION[family]
    v = [Q(1)] + [Q(0)] * (dim - 1)
    m0 = cell_matrix(family, spec0.cells[0], boundary=True)
    inner = uniform_spec_symbolic(family, 1, p, rational(rho), destination).cells[1]
    m = cell_matrix(family, inner)
    idx = 0 if family == K4_ALL_TERMINAL else _transfer._DEST_INDEX[destination]
    v = _transfer._matvec(m0, v)
    out = []
    for _ in range(n_terms):
        entry = v[idx]
        out.append(entry if isinstance(entry, Poly) else Poly.const(entry, "p"))
        v = _transfer._matvec(m, v)
    return out


def gf_from_transfer(family: str, rho=Q(1), destination: str | None = None) -> RatFunc:
    """Generating function derived from the transfer matrix: denominator is
    the characteristic polynomial reversed in z, numerator is fixed by the
    first dim+1 series terms; the quotient is then reduced."""
    from .poly import charpoly_coeffs

    rho = rational(rho)
    p = Poly.x("p")
    inner = uniform_spec_symbolic(family, 1, p, rho, destination).cells[1]
    m = cell_matrix(family, inner)
    cp = charpoly_coeffs(m)  # ascending in the eigenvalue, monic
    dim = DIMENSION[family]
    den = Poly(tuple(cp[dim - k] for k in range(dim + 1)), "z")  # det(I - zM)

    series = reliability_series(family, dim + 1, rho, destination)
    r_poly = Poly(tuple(series), "z")
    num = (r_poly * den).truncate(dim + 1)
    # N has degree < dim + 1 whenever the GF is rational with this
    # denominator; higher garbage terms would indicate a transcription bug.
    return RatFunc(num, den)


# -- series and recurrences -----------------------------------------------------


def series(gf: RatFunc, n_terms: int) -> list:
    """First n_terms+1 Taylor coefficients of the generating function."""
    return gf.series(n_terms + 1)


@dataclass(frozen=True)
class Recurrence:
    """R_n = -(d1 R_{n-1} + ... + dm R_{n-m}) for n >= len(initial);
    d coefficients come from the monic-at-z=0 denominator."""

    den_coeffs: tuple     # (1, d1, ..., dm)
    initial: tuple        # R_0 .. R_{k-1}

    @property
    def order(self) -> int:
        return len(self.den_coeffs) - 1


def recurrence_from_gf(gf: RatFunc) -> Recurrence:
    m = gf.den.degree()
    start = max(m, gf.num.degree() + 1)
    init = gf.series(start)
    return Recurrence(tuple(gf.den.coeffs), tuple(init))


def recurrence_apply(rec: Recurrence, n_terms: int) -> list:
    """R_0 .. R_{n_terms}."""
    out = list(rec.initial[: n_terms + 1])
    d = rec.den_coeffs
    while len(out) <= n_terms:
        n = len(out)
        acc = 0
        for j in range(1, rec.order + 1):
            acc = acc + d[j] * out[n - j]
        out.append(-acc)
    return out


# -- spectral closed forms ------------------------------------------------------

DISC_A = _P(4, 0, 32, -204, 452, -516, 329, -112, 16)
LAMBDA_POLY = _P(2, 4, -14, 13, -4)            # lambda_pm = p/2 (this +- sqrt(A))
RESIDUE_POLY = _P(2, 2, 10, -27, 19, -4)       # a_pm = (1+p)/4 +- this/(4 sqrt A)
DISC_B = _P(144, -640, 1236, -1308, 793, -260, 36)
ZETA_POLY = _P(12, -26, 21, -6)                # zeta_+ = p^2/2 (this + sqrt(B))


@dataclass(frozen=True)
class SpectralData:
    """Perfect-node spectral quantities of the uniform K4 ladder."""

    lambda_plus: object
    lambda_minus: object
    a_plus: object
    a_minus: object
    disc_a: object          # exact rational when p is rational
    xi: object              # None outside 0 < lambda_plus < 1
    zeta_plus: object
    disc_b: object


def closed_forms(p, dps: int = 40) -> SpectralData:
    """Evaluate the two-terminal eigenvalue pair, residue weights,
    correlation length, and the all-terminal scaling factor at rho = 1."""
    from .roots import to_mpf

    exact = True
    try:
        pq = rational(p)
    except (TypeError, ValueError):
        exact = False
    with mp.workdps(dps):
        disc_a = DISC_A(pq) if exact else DISC_A(mpf(p))
        disc_b = DISC_B(pq) if exact else DISC_B(mpf(p))
        pf = to_mpf(pq) if exact else mpf(p)
        sa = mp_sqrt(to_mpf(disc_a) if exact else disc_a)
        sb = mp_sqrt(to_mpf(disc_b) if exact else disc_b)
        lam_base = to_mpf(LAMBDA_POLY(pq)) if exact else LAMBDA_POLY(mpf(p))
        res_base = to_mpf(RESIDUE_POLY(pq)) if exact else RESIDUE_POLY(mpf(p))
        zeta_base = to_mpf(ZETA_POLY(pq)) if exact else ZETA_POLY(mpf(p))
        lam_p = pf / 2 * (lam_base + sa)
        lam_m = pf / 2 * (lam_base - sa)
        if sa == 0:
            a_p = a_m = (1 + pf) / 4
        else:
            a_p = (1 + pf) / 4 + res_base / (4 * sa)
            a_m = (1 + pf) / 4 - res_base / (4 * sa)
        zeta = pf ** 2 / 2 * (zeta_base + sb)
        xi = None
        if 0 < lam_p < 1:
            xi = -1 / mp_log(lam_p)
    return SpectralData(lam_p, lam_m, a_p, a_m, disc_a, xi, zeta, disc_b)


def lambda_max(family: str, p, rho=Q(1), precision: int = 128):
    """Largest-modulus eigenvalue(s): reciprocals of the smallest-modulus
    denominator roots.  A unique dominant value is returned bare; modulus
    ties come back as a tuple."""
    from .roots import aberth_roots, to_mpc

    den = Poly.const(Q(1), "z")
    for f in denominator_factors(family, rho):
        den = den * f
    pq = rational(p)
    scal = den.map_coeffs(lambda c: c(pq) if isinstance(c, Poly) else c)
    if scal.degree() < 1:
        raise FamilyError("degenerate denominator at this parameter point")
    zs = aberth_roots(scal, precision_bits=precision)
    with mp.workprec(precision):
        eigs = sorted((1 / z for z in zs.roots if z != 0),
                      key=lambda w: -abs(w))
        top = abs(eigs[0])
        tol = mpf(2) ** (-(precision // 4))
        dominant = [w for w in eigs if abs(top - abs(w)) <= tol * top]
    if len(dominant) == 1:
        w = dominant[0]
        return w.real if w.imag == 0 else w
    return tuple(dominant)
