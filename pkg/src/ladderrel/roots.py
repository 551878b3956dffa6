"""Arbitrary-precision complex root finding for exact integer/rational
polynomials: a simultaneous Aberth-Ehrlich iteration with a squarefree
pre-pass, staged working precision, and per-root residual certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import mpmath
from mpmath import mp, mpc, mpf

from .poly import Poly, squarefree_decomposition
from .rings import Q, is_rational


class RootFindingError(RuntimeError):
    """Non-convergence after the precision escalation budget."""


@dataclass(frozen=True)
class ZeroSet:
    """Roots of one polynomial with residual certificates.

    ``roots`` lists each root once per multiplicity; ``residuals`` holds
    |f(r)| / (max|coeff| * max(1,|r|)^deg) for the squarefree factor the
    root was found in.
    """

    roots: tuple
    residuals: tuple
    precision: int
    degree: int
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.roots)

    def max_modulus(self) -> mpf:
        return max(abs(r) for r in self.roots)


def _integer_coeffs(f: Poly) -> list:
    """Clear denominators; returns ascending integer coefficients."""
    den = 1
    for c in f.coeffs:
        c = Q(c)
        den = den * (c.denominator // math.gcd(int(den), int(c.denominator)))
    return [int(Q(c) * den) for c in f.coeffs]


def _log2_abs(c) -> float:
    # log-domain to survive huge integers
    if isinstance(c, int):
        return math.log2(abs(c))
    return float(mpmath.log(abs(mpc(c)), 2))


def _hull_edges(coeffs: list):
    """Edges of the upper convex hull of (degree, log2|coeff|).

    Each edge spanning degrees [i0, i1] with slope s accounts for i1-i0
    roots of modulus about 2**(-s); this is the classic Newton-polygon
    estimate and drives the initial point placement."""
    pts = [(i, _log2_abs(c)) for i, c in enumerate(coeffs)
           if not _is_zero_coeff(c)]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep upper hull: drop the middle point when it sags
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return list(zip(hull, hull[1:]))


def _initial_points(coeffs: list, prec: int) -> list:
    """Perturbed circles, one per Newton-polygon edge; deterministic.

    Starting each root cluster on a circle at its own modulus scale keeps
    the iteration count low when root moduli span many octaves."""
    pts = []
    k = 0
    n = len(coeffs) - 1
    for (i0, l0), (i1, l1) in _hull_edges(coeffs):
        m = i1 - i0
        slope = (l1 - l0) / m
        radius = mpf(2) ** (-slope)
        for j in range(m):
            # irrational angle step avoids symmetric stalls
            theta = 2 * mp.pi * (j + mpf(1) / 3) / m + mpf(k) / (7 * n)
            pts.append(radius * (mp.cos(theta) + 1j * mp.sin(theta))
                       * (1 + mpf(k % 5) / 1000))
            k += 1
    return pts


def _is_zero_coeff(c) -> bool:
    return c == 0


def _horner2(coeffs, z):
    """f(z) and f'(z) in one pass."""
    f = mpc(0)
    df = mpc(0)
    for c in reversed(coeffs):
        df = df * z + f
        f = f * z + c
    return f, df


def _aberth_sweep_converge(coeffs: list, pts: list, prec: int, max_sweeps: int,
                           tol_bits: int | None = None):
    """Jacobi-style Aberth iteration at fixed precision; returns points and
    a convergence flag."""
    n = len(pts)
    tol = mpf(2) ** (-(tol_bits if tol_bits is not None else prec - 6))
    # Horner roundoff scales like |z|^deg * 2^-prec; without guard bits the
    # offset floor can sit above tol for large-modulus roots
    import math
    rmax = max((abs(complex(z)) for z in pts), default=1.0)
    guard = int((len(coeffs) - 1) * math.log2(max(1.0, rmax))) + 1
    with mp.workprec(prec + 20 + guard):
        pts = [mpc(z) for z in pts]
        for _ in range(max_sweeps):
            offsets = []
            worst = mpf(0)
            for i, z in enumerate(pts):
                f, df = _horner2(coeffs, z)
                if f == 0:
                    offsets.append(mpc(0))
                    continue
                if df == 0:
                    offsets.append(mpc(tol) * (1 + abs(z)))
                    worst = max(worst, mpf(1))
                    continue
                newton = f / df
                s = mpc(0)
                for j, w in enumerate(pts):
                    if j != i:
                        d = z - w
                        if d == 0:
                            d = mpc(tol) * (1 + abs(z))
                        s += 1 / d
                denom = 1 - newton * s
                if denom == 0:
                    off = newton
                else:
                    off = newton / denom
                offsets.append(off)
                scale = abs(z) + 1
                worst = max(worst, abs(off) / scale)
            pts = [z - o for z, o in zip(pts, offsets)]
            if worst < tol:
                return pts, True
        return pts, False


_CERT_PRIME = 2 ** 61 - 1


def _squarefree_certificate(core: list) -> bool:
    """True when gcd(f, f') over GF(p) is constant, which proves f is
    squarefree over the rationals.  False is inconclusive (caller falls
    back to the full decomposition)."""
    p = _CERT_PRIME
    a = [c % p for c in core]
    b = [(i * c) % p for i, c in enumerate(core)][1:]
    if a[-1] == 0 or b[-1] == 0:
        return False  # leading coefficient vanished mod p
    while b:
        while b and b[-1] == 0:
            b.pop()
        if not b:
            break
        if len(a) < len(b):
            a, b = b, a
            continue
        inv = pow(b[-1], p - 2, p)
        # a mod b over GF(p)
        r = list(a)
        for k in range(len(r) - 1, len(b) - 2, -1):
            q = (r[k] * inv) % p
            if q:
                off = k - (len(b) - 1)
                for j in range(len(b)):
                    r[off + j] = (r[off + j] - q * b[j]) % p
        a, b = b, r[: len(b) - 1]
    return len(a) == 1


def _multi_scale_warm(core: list) -> list:
    """Double-precision root estimates for integer polynomials whose root
    moduli span many octaves.

    One companion solve cannot resolve a coefficient spread of hundreds of
    bits, so the variable is rescaled once per modulus scale on a sqrt(2)
    ladder covering the Newton-polygon range; coefficients that underflow
    the rescaled window drop out, and only companion roots landing in the
    (overlapping) modulus band of their scale are kept.  The union over
    scales is returned unvalidated: duplicates from band overlap and
    estimates that fail to polish are weeded out by the caller."""
    import numpy as np

    n = len(core) - 1
    logs = [(_log2_abs(c) if not _is_zero_coeff(c) else None) for c in core]
    exps = []
    for (i0, l0), (i1, l1) in _hull_edges(core):
        exps.append(-(l1 - l0) / (i1 - i0))
    lo, hi = min(exps) - 0.5, max(exps) + 0.5
    est = []
    band_lo, band_hi = 2.0 ** -0.5, 2.0 ** 0.5
    s = lo
    while s <= hi:
        scaled = [(lb + i * s if lb is not None else None)
                  for i, lb in enumerate(logs)]
        top = max(lb for lb in scaled if lb is not None)
        arr = np.zeros(n + 1)
        for i, lb in enumerate(scaled):
            if lb is not None and lb - top > -600:
                sign = 1 if (core[i] > 0 if isinstance(core[i], int)
                             else mpf(core[i]) > 0) else -1
                arr[i] = sign * 2.0 ** (lb - top)
        desc = arr[::-1]
        nz = np.nonzero(desc)[0]
        if nz.size >= 2:
            desc = desc[nz[0]: nz[-1] + 1]
            try:
                q = np.roots(desc)
            except Exception:
                q = np.array([])
            for w in q:
                if np.isfinite(w) and band_lo <= abs(w) <= band_hi:
                    est.append(complex(w) * 2.0 ** s)
        s += 0.5
    return est


def _polish_one(cg: list, deg: int, norm_bits: int, z0, sprec: int,
                iters: int = 60):
    """One Newton refinement at per-point guard precision (gmpy2).

    Returns the refined point, or None when the budget runs out; points
    outside the root set creep inward at rate 1-1/deg per step, so
    spurious companion estimates time out here instead of converging."""
    az = abs(complex(z0))
    guard = norm_bits + int(deg * math.log2(max(1.0, az))) + 1
    wp = sprec + 20 + guard
    best = z0
    # small |f'| (dense root stretches) lifts the evaluation-noise floor
    # above the step tolerance; a stagnating tiny step means more working
    # precision, not a miss
    for _ in range(4):
        with gmpy2.context(precision=wp):
            z = gmpy2.mpc(complex(best)) if not isinstance(best, gmpy2.mpc) \
                else +best
            tol = gmpy2.mpfr(2) ** (-(sprec - 6))
            loose = gmpy2.mpfr(2) ** (-(sprec // 3))
            prev = None
            for _ in range(iters):
                f = gmpy2.mpc(0)
                df = gmpy2.mpc(0)
                for c in reversed(cg):
                    df = df * z + f
                    f = f * z + c
                if f == 0:
                    return z
                if df == 0:
                    return None
                step = abs(f / df)
                z -= f / df
                scale = 1 + abs(z)
                if step <= tol * scale:
                    return z
                if prev is not None and step >= prev / 2 \
                        and step <= loose * scale:
                    best = z
                    break
                prev = step
            else:
                return None
        wp += 96
    return None


def _g_aberth(cg: list, pts: list, sprec: int, norm_bits: int,
              max_sweeps: int):
    """Simultaneous Aberth-Ehrlich sweeps in gmpy2 arithmetic.

    Used to repel coincident estimates into missed roots: points already
    on roots barely move, and the repulsion term walks the extras into
    the gaps."""
    deg = len(cg) - 1
    rmax = max(abs(complex(z)) for z in pts)
    guard = norm_bits + int(deg * math.log2(max(1.0, rmax))) + 1
    with gmpy2.context(precision=sprec + 20 + guard):
        pts = [gmpy2.mpc(complex(z)) if not isinstance(z, gmpy2.mpc) else +z
               for z in pts]
        tol = gmpy2.mpfr(2) ** (-(sprec - 6))
        for _ in range(max_sweeps):
            new = []
            worst = gmpy2.mpfr(0)
            for i, z in enumerate(pts):
                f = gmpy2.mpc(0)
                df = gmpy2.mpc(0)
                for c in reversed(cg):
                    df = df * z + f
                    f = f * z + c
                if f == 0:
                    new.append(z)
                    continue
                if df == 0:
                    new.append(z + tol * (1 + abs(z)))
                    worst = max(worst, gmpy2.mpfr(1))
                    continue
                newton = f / df
                s = gmpy2.mpc(0)
                for j, w in enumerate(pts):
                    if j != i:
                        d = z - w
                        if d == 0:
                            d = gmpy2.mpc(tol * (1 + abs(z)))
                        s += 1 / d
                denom = 1 - newton * s
                off = newton / denom if denom != 0 else newton
                new.append(z - off)
                worst = max(worst, abs(off) / (1 + abs(z)))
            pts = new
            if worst < tol:
                return pts, True
        return pts, False


def _dedupe(pts: list, tol_exp: int) -> list:
    """Merge points closer than 2**tol_exp * (1+|z|); keeps first of each
    cluster.  Sorting by real part makes the scan deterministic."""
    out = []
    for z in sorted(pts, key=lambda w: (float(w.real), float(w.imag))):
        if out:
            tol = 2.0 ** tol_exp * (1 + abs(complex(z)))
            if any(abs(complex(z) - complex(w)) <= tol for w in out[-8:]):
                continue
        out.append(z)
    return out


def _gap_seeds(good: list, need: int) -> list:
    """Seed points aimed at holes in a root set that lies along curves.

    A root whose nearest neighbour sits much farther than the typical
    spacing borders a gap; mirroring that neighbour through the root
    points a seed into the gap.  Returns up to ``need`` seeds, widest
    gaps first."""
    if need <= 0 or len(good) < 4:
        return []
    import numpy as np

    arr = np.array([complex(z) for z in good])
    cand = []
    for i, z in enumerate(arr):
        d = np.abs(arr - z)
        d[i] = np.inf
        j = int(np.argmin(d))
        cand.append((float(d[j]), complex(2 * z - arr[j])))
    med = sorted(c[0] for c in cand)[len(cand) // 2]
    cand = [c for c in cand if c[0] > 1.7 * med]
    cand.sort(key=lambda c: -c[0])
    return [z for _, z in cand[:need]]


def _angular_gaps(good: list, top: int = 4) -> list:
    """Largest angular gaps (relative to centroid) in a root set lying
    along curves; returns (center, radius) disks covering them."""
    import numpy as np

    arr = np.array([complex(z) for z in good])
    cen = arr.mean()
    order = np.argsort(np.angle(arr - cen))
    a = np.angle(arr - cen)[order]
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    med = float(np.median(gaps))
    out = []
    for i in np.argsort(-gaps)[:top]:
        if gaps[i] <= 3 * med:
            break
        z1 = arr[order[i]]
        z2 = arr[order[(i + 1) % len(arr)]]
        out.append((complex(z1 + z2) / 2, abs(z2 - z1)))
    return out


def _local_roots(cg: list, deg: int, norm_bits: int, center: complex,
                 radius: float, sprec: int) -> list:
    """Roots inside a disk, via an exact Taylor shift to its center.

    Shifting makes the local roots the small-modulus roots of the shifted
    polynomial, where one double-precision companion solve is accurate;
    used for clusters that accumulate toward an isolated point and are
    invisible to both the scale ladder and the repulsion fill."""
    import numpy as np

    wp = norm_bits + int(deg * math.log2(max(1.0, abs(center) + radius))) + 160
    with gmpy2.context(precision=wp):
        p0 = gmpy2.mpc(center)
        b = [gmpy2.mpc(c) for c in cg]
        for j in range(deg):
            for i in range(deg - 1, j - 1, -1):
                b[i] += p0 * b[i + 1]
        logs = []
        for k, c in enumerate(b):
            ac = abs(c)
            logs.append(None if ac == 0 else
                        float(gmpy2.log2(ac)) + k * math.log2(radius))
    if all(lb is None for lb in logs):
        return []
    topl = max(lb for lb in logs if lb is not None)
    arr = np.zeros(deg + 1, dtype=complex)
    with gmpy2.context(precision=wp):
        for k, lb in enumerate(logs):
            if lb is not None and lb - topl > -600:
                c = b[k]
                arr[k] = complex(c / abs(c)) * 2.0 ** (lb - topl)
    desc = arr[::-1]
    nz = np.nonzero(desc)[0]
    if nz.size < 2:
        return []
    try:
        q = np.roots(desc[nz[0]: nz[-1] + 1])
    except Exception:
        return []
    return [center + radius * complex(w) for w in q
            if np.isfinite(w) and abs(w) <= 2.0]


class _PhaseJump(Exception):
    """Contour passes too close to a root to track the argument."""


def _winding_recover(cg: list, deg: int, norm_bits: int, good: list,
                     sprec: int) -> list:
    """Find the roots still missing from `good` by exact contour counting.

    Quadtree over the bounding box of the known roots: the winding number
    of the polynomial around a box minus the known roots inside gives the
    number of missing roots in that box, and only deficient boxes are
    split.  Once a box is small the missing roots are either recovered by
    a local shifted solve or, at the finest level, by a plain polish from
    the box centre.  Pure counting, so it finds roots regardless of how
    pathologically they cluster."""
    known = [complex(z) for z in good]
    xs = [z.real for z in known]
    ys = [z.imag for z in known]
    mx = max(0.5, 0.25 * (max(xs) - min(xs)), 0.25 * (max(ys) - min(ys)))
    box0 = (min(xs) - mx, max(xs) + mx, min(ys) - mx, max(ys) + mx)
    rmax = max(abs(complex(x, y)) for x in box0[:2] for y in box0[2:])
    wp = norm_bits + int(deg * math.log2(max(1.0, rmax))) + 96

    def arg_at(z):
        acc = gmpy2.mpc(0)
        for c in reversed(cg):
            acc = acc * z + c
        a = abs(acc)
        if a == 0:
            raise _PhaseJump
        return math.atan2(float(acc.imag / a), float(acc.real / a))

    def seg(z0, z1, p0, p1, depth=0):
        d = math.remainder(p1 - p0, 2 * math.pi)
        if abs(d) < 1.2:
            return d
        if depth > 48:
            raise _PhaseJump
        zm = (z0 + z1) / 2
        pm = arg_at(zm)
        return (seg(z0, zm, p0, pm, depth + 1)
                + seg(zm, z1, pm, p1, depth + 1))

    def count(box, tries=3):
        x0, x1, y0, y1 = box
        for t in range(tries):
            try:
                corners = [gmpy2.mpc(x0, y0), gmpy2.mpc(x1, y0),
                           gmpy2.mpc(x1, y1), gmpy2.mpc(x0, y1)]
                tot = 0.0
                for a, b in zip(corners, corners[1:] + corners[:1]):
                    n = 8
                    pts = [a + (b - a) * k / n for k in range(n + 1)]
                    phs = [arg_at(z) for z in pts]
                    tot += sum(seg(pts[k], pts[k + 1], phs[k], phs[k + 1])
                               for k in range(n))
                return round(tot / (2 * math.pi))
            except _PhaseJump:
                # a root sits on the contour; nudge the box outward
                e = (1e-6 + t * 3e-6) * (x1 - x0)
                x0, x1, y0, y1 = x0 - e, x1 + e, y0 - e, y1 + e
        return None

    found = []

    def inside(box):
        x0, x1, y0, y1 = box
        return sum(1 for z in known + [complex(w) for w in found]
                   if x0 < z.real < x1 and y0 < z.imag < y1)

    def accept(w, box):
        x0, x1, y0, y1 = box
        z = complex(w)
        if not (x0 - 1e-9 < z.real < x1 + 1e-9
                and y0 - 1e-9 < z.imag < y1 + 1e-9):
            return False
        tol = 2.0 ** -(sprec - 40)
        for z2 in known + [complex(v) for v in found]:
            if abs(z - z2) <= tol * (1 + abs(z)):
                return False
        found.append(w)
        return True

    with gmpy2.context(precision=wp):
        total = count(box0)
        if total is None:
            return []
        missing = total - len(known)
        stack = [(box0, total)]
        while stack and len(found) < missing:
            box, cnt = stack.pop()
            deficit = cnt - inside(box)
            if deficit <= 0:
                continue
            x0, x1, y0, y1 = box
            size = max(x1 - x0, y1 - y0)
            if size < 0.05:
                cen = complex((x0 + x1) / 2, (y0 + y1) / 2)
                for z0 in _local_roots(cg, deg, norm_bits, cen,
                                       0.75 * size, sprec):
                    w = _polish_one(cg, deg, norm_bits, z0, sprec, iters=40)
                    if w is not None:
                        accept(w, box)
                deficit = cnt - inside(box)
                if deficit <= 0:
                    continue
            if size < 1e-7:
                cen = complex((x0 + x1) / 2, (y0 + y1) / 2)
                w = _polish_one(cg, deg, norm_bits, cen, sprec, iters=80)
                if w is not None:
                    accept(w, box)
                continue
            xm = (x0 + x1) / 2
            ym = (y0 + y1) / 2
            for child in ((x0, xm, y0, ym), (xm, x1, y0, ym),
                          (x0, xm, ym, y1), (xm, x1, ym, y1)):
                c = count(child)
                if c is not None and c > 0:
                    stack.append((child, c))
    return found


def _g_to_mpc(z, prec: int):
    """gmpy2.mpc -> mpmath.mpc at the given precision."""
    with mp.workprec(prec):
        def cv(x):
            if x == 0:
                return mpf(0)
            m, e = x.as_mantissa_exp()
            return mpf(int(m)) * mpf(2) ** int(e)
        return mpc(cv(z.real), cv(z.imag))


def _refine_warm(core: list, warm: list, precision: int):
    """Polish multi-scale companion estimates to the target precision.

    Stage one polishes every candidate at low precision and deduplicates
    (band overlap yields each root about twice; spurious estimates stall
    and drop out).  A candidate count differing from the degree means a
    root was missed at every scale, and None sends the caller down the
    simultaneous-iteration path."""
    deg = len(core) - 1
    cg = [gmpy2.mpz(c) for c in core]
    norm_bits = max(int(_log2_abs(c)) for c in core if not _is_zero_coeff(c)) + 1
    stage1 = 160
    converged = []
    stalled = []
    for z0 in warm:
        z = _polish_one(cg, deg, norm_bits, z0, stage1)
        if z is not None:
            converged.append(z)
        else:
            stalled.append(z0)
    good = _dedupe(converged, -(stage1 - 40))
    if len(good) > deg:
        return None
    if len(good) < deg:
        kept = {id(z) for z in good}
        dropped = [z for z in converged if id(z) not in kept]
        med = sorted(abs(complex(z)) for z in good)[len(good) // 2]
        stalled.sort(key=lambda z: abs(math.log(max(1e-30, abs(complex(z))) / med)))
        pool = dropped + stalled + good
        # alternate short repulsion bursts with individual polish: the
        # burst walks seeds into the gaps, the polish locks them on, and
        # waiting for the coupled iteration's own tolerance would spend
        # hundreds of sweeps on points that are already done.  Each round
        # reseeds from scratch so seeds that collapsed onto an already
        # found root get a new direction to explore.
        k0 = 0
        for rnd in range(10):
            need = deg - len(good)
            if rnd % 2 == 0 and len(good) >= 8:
                # whole sub-arcs and accumulation clusters hide in the
                # largest angular gaps; solve those disks directly
                recovered = []
                for cen, rad in _angular_gaps(good):
                    for z0 in _local_roots(cg, deg, norm_bits, cen, rad,
                                           stage1):
                        w = _polish_one(cg, deg, norm_bits, z0, stage1,
                                        iters=12)
                        if w is not None:
                            recovered.append(w)
                if recovered:
                    good = _dedupe(good + recovered, -(stage1 - 40))
                    need = deg - len(good)
                if need == 0:
                    break
            seeds = _gap_seeds(good, need)
            k = k0
            while len(seeds) < need:
                z = pool[k % len(pool)]
                seeds.append(complex(z) * (1 + 1e-3 * complex(
                    math.cos(0.7 + k), math.sin(0.7 + k))))
                k += 1
            k0 += need
            pts, _ok = _g_aberth(cg, good + seeds, stage1, norm_bits, 25)
            locked = []
            for z in pts:
                w = _polish_one(cg, deg, norm_bits, z, stage1, iters=12)
                if w is not None:
                    locked.append(w)
            good = _dedupe(locked, -(stage1 - 40))
            if len(good) == deg:
                break
        if 0 < deg - len(good) <= 32:
            # stragglers the heuristics cannot reach; count them down
            # exactly with contour integrals
            extra = _winding_recover(cg, deg, norm_bits, good, stage1)
            if extra:
                good = _dedupe(good + extra, -(stage1 - 40))
        if len(good) != deg:
            return None
    prec = stage1
    while prec < precision:
        prec = min(prec * 4, precision)
        nxt = []
        for z in good:
            z2 = _polish_one(cg, deg, norm_bits, z, prec)
            if z2 is None:
                return None
            nxt.append(z2)
        good = nxt
    # two estimates collapsing onto one root would silently drop a root
    if len(_dedupe(good, -(precision - 10))) != deg:
        return None
    return [_g_to_mpc(z, precision + 20) for z in good]


def _find_roots_squarefree(coeffs: list, precision: int, max_sweeps: int = 400,
                           warm: list | None = None):
    """Roots of a squarefree integer polynomial (ascending coefficients)."""
    # strip roots at the origin
    shift = 0
    while coeffs[shift] == 0:
        shift += 1
    core = coeffs[shift:]
    zero_roots = [mpc(0)] * shift
    if len(core) == 1:
        return zero_roots
    if len(core) == 2:
        with mp.workprec(precision + 20):
            return zero_roots + [mpc(mpf(-core[0]) / mpf(core[1]))]
    # staged precision: converge cheaply, then refine at the target
    stages = [min(160, precision)]
    while stages[-1] < precision:
        stages.append(min(stages[-1] * 4, precision))
    if warm is None:
        warm = _multi_scale_warm(core)
    if warm:
        pts = _refine_warm(core, warm, precision)
        if pts is not None:
            return zero_roots + pts
    pts = _initial_points(core, stages[0])
    budget = max_sweeps
    for prec in stages:
        pts, ok = _aberth_sweep_converge(core, pts, prec, budget)
        if not ok and prec == stages[0]:
            # escalate the cheap stage before giving up
            pts, ok = _aberth_sweep_converge(core, pts, prec * 2, budget)
        budget = 60
    if not ok:
        raise RootFindingError(
            f"Aberth iteration did not converge at {precision} bits "
            f"(degree {len(core) - 1})")
    return zero_roots + pts


def aberth_roots(f, precision_bits: int | None = None, meta: dict | None = None,
                 warm: list | None = None) -> ZeroSet:
    """All complex roots of a rational-coefficient polynomial.

    Repeated factors are stripped by squarefree decomposition first; each
    root is reported with its multiplicity.  Default precision follows the
    64 + 4*degree policy, doubling once more on non-convergence.  ``warm``
    optionally supplies caller-known root estimates (they only apply when
    the certificate shows a single squarefree factor).
    """
    if not isinstance(f, Poly):
        f = Poly(tuple(f), "z")
    if f.degree() < 1:
        raise ValueError("constant polynomial has no roots")
    precision = precision_bits or (64 + 4 * f.degree())

    roots = []
    residuals = []
    # a modular gcd certificate lets high-degree squarefree inputs (with at
    # most a repeated root at the origin) skip the integer-gcd decomposition,
    # whose cost explodes with degree and coefficient size
    ints_full = _integer_coeffs(f)
    shift = 0
    while ints_full[shift] == 0:
        shift += 1
    if len(ints_full) - shift > 1 and _squarefree_certificate(ints_full[shift:]):
        factors = [(f, 1, ints_full)]
    else:
        factors = [(g, m, None) for g, m in squarefree_decomposition(f)]
    for factor, mult, pre in factors:
        if factor.degree() < 1:
            continue
        ints = pre if pre is not None else _integer_coeffs(factor)
        hint = warm if pre is not None else None
        try:
            rts = _find_roots_squarefree(ints, precision, warm=hint)
        except RootFindingError:
            rts = _find_roots_squarefree(ints, 2 * precision, warm=hint)
        norm = mpf(max(abs(c) for c in ints))
        deg = len(ints) - 1
        with mp.workprec(precision + 20):
            for r in rts:
                fval, _ = _horner2(ints, r)
                res = abs(fval) / (norm * max(mpf(1), abs(r)) ** deg)
                for _ in range(mult):
                    roots.append(r)
                    residuals.append(res)
    return ZeroSet(tuple(roots), tuple(residuals), precision, f.degree(),
                   meta or {})


def aberth_roots_numeric(coeffs, precision_bits: int = 128,
                         max_sweeps: int = 400, initial: list | None = None,
                         tol_bits: int | None = None) -> list:
    """Roots of a numeric-coefficient polynomial (ascending mpc/mpf/rational
    coefficients).  Used for eigenvalue classification at non-rational
    parameter points, where exact squarefree preprocessing is unavailable.

    Clustered (near-multiple) roots converge slowly, so a run that misses
    the sweep tolerance is still accepted when every residual certificate
    is below 2^(-precision/3).
    """
    with mp.workprec(precision_bits + 20):
        cs = [to_mpc(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) < 2:
        raise ValueError("constant polynomial has no roots")
    shift = 0
    while cs[shift] == 0:
        shift += 1
    core = cs[shift:]
    roots = [mpc(0)] * shift
    if len(core) == 2:
        with mp.workprec(precision_bits + 20):
            return roots + [-core[0] / core[1]]
    # warm starts (e.g. a parameter scan) converge in a few sweeps; fall
    # back to the fresh circle when tracking breaks down
    if initial is not None and len(initial) == len(core) - 1:
        pts, ok = _aberth_sweep_converge(core, list(initial), precision_bits,
                                         min(max_sweeps, 40), tol_bits)
        if ok:
            return roots + pts
    pts = _initial_points(core, precision_bits)
    pts, ok = _aberth_sweep_converge(core, pts, precision_bits, max_sweeps,
                                     tol_bits)
    if not ok:
        with mp.workprec(precision_bits + 20):
            norm = max(abs(c) for c in core)
            deg = len(core) - 1
            loose = mpf(2) ** (-(precision_bits // 3))
            for r in pts:
                fval, _ = _horner2(core, r)
                if abs(fval) / (norm * max(mpf(1), abs(r)) ** deg) > loose:
                    raise RootFindingError(
                        f"numeric Aberth iteration stalled at "
                        f"{precision_bits} bits (degree {deg})")
    return roots + pts


def residual_bound(precision: int) -> mpf:
    """Acceptance bound used by the tests: 2^(-precision/2)."""
    return mpf(2) ** (-precision // 2)


def to_mpf(x, prec: int | None = None):
    """Exact rational -> mpf at current (or given) precision."""
    if is_rational(x):
        q = Q(x)
        with mp.workprec(prec or mp.prec):
            return mpf(int(q.numerator)) / mpf(int(q.denominator))
    return mpf(x)


def to_mpc(x, prec: int | None = None):
    if isinstance(x, (mpc, complex)):
        return mpc(x)
    return mpc(to_mpf(x, prec))
