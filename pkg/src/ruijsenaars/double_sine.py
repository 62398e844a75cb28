"""Numerical evaluation of the double sine function S2(z | omega1, omega2).

Strategy, per evaluation point (after rescaling by 1/|omega1+omega2|, which
leaves S2 invariant):

* far from the real-period cones (large |Im(z/omega_j)|): a Bernoulli-phase
  exponential series, exact to machine precision after ~15 terms.  Rational
  period ratios p/q make pairs of series denominators vanish; those pairs are
  replaced by their merged finite limit, so the standard parameter sets with
  equal or rationally related periods evaluate on this path as well.
* in the band around the real axis: reduce Re z into a centered strip with
  the shift relations S2(z)/S2(z+omega_1) = 2 sin(pi z/omega_2) (and 1<->2),
  then evaluate the logarithm by a fixed Gauss-Legendre panel rule for the
  strip integral representation, with the removable singularity at the
  origin handled by a Taylor section and the slow algebraic tail added in
  closed form.

Evaluations are vectorized over ndarrays of points; the per-parameter node
tables and series coefficients are cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (ConeProximity, PoleProximity, PrecisionLoss,
                     QuadratureFailure, StripViolation)
from .params import Params
from .quadrature import QuadratureSpec

# even Taylor coefficients of x/sinh(x)
_CSCH = np.array([1.0, -1.0 / 6, 7.0 / 360, -31.0 / 15120, 127.0 / 604800,
                  -73.0 / 3421440, 1414477.0 / 653837184000])
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

_SERIES_THRESHOLD = 0.5       # decay-exponent threshold for the series path
_SERIES_TERMS = 20
_MAX_SHIFTS = 64
_POLE_GUARD_REL = 1e-10       # times |omega1 + omega2|
_TABLE_TARGET = 5e-13


@dataclass(frozen=True)
class StripPoint:
    z: complex
    strip_position: float


@dataclass(frozen=True)
class PoleZeroIndex:
    m: int
    k: int
    kind: str  # "pole" | "zero"

    def __post_init__(self):
        if self.kind not in ("pole", "zero"):
            raise ValueError("kind must be 'pole' or 'zero'")
        if self.m < 0 or self.k < 0:
            raise ValueError("indices must be nonnegative")
        if self.kind == "pole" and (self.m < 1 or self.k < 1):
            raise ValueError("pole indices start at m = k = 1")

    def location(self, p: Params) -> complex:
        if self.kind == "pole":
            return self.m * p.omega1 + self.k * p.omega2
        return -self.m * p.omega1 - self.k * p.omega2


def _log_2sin(w: np.ndarray) -> np.ndarray:
    """log(2 sin(w)) stable for large |Im w|; branch unspecified."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    up = w.imag >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[up] = 0.5j * np.pi - 1j * w[up] + np.log1p(-np.exp(2j * w[up]))
        out[~up] = -0.5j * np.pi + 1j * w[~up] + np.log1p(-np.exp(-2j * w[~up]))
    return out


class _S2Engine:
    """Per-period-pair evaluation engine for log S2."""

    def __init__(self, omega1: complex, omega2: complex):
        self.scale = 1.0 / abs(omega1 + omega2)
        self.w1 = omega1 * self.scale
        self.w2 = omega2 * self.scale
        self.sigma = self.w1 + self.w2
        self._classify()
        self._series_setup()
        self._table = None

    # -- classification ---------------------------------------------------

    def _classify(self):
        r = self.w2 / self.w1
        self.mode = "generic"
        self.pq = None
        if abs(r.imag) <= 1e-12 * abs(r):
            frac = Fraction(r.real).limit_denominator(64)
            if frac.numerator >= 1:
                delta = abs(r.real - float(frac)) / abs(r.real)
                if delta <= 1e-12:
                    self.mode = "resonant"
                    self.pq = (frac.numerator, frac.denominator)
                elif delta < 1e-5:
                    # too close for the generic series, too far to merge
                    self.mode = "table-only"

    def _series_setup(self):
        w1, w2, M = self.w1, self.w2, _SERIES_TERMS
        self.pen1 = min(0.0, (w2 / w1).imag)
        self.pen2 = min(0.0, (w1 / w2).imag)
        m = np.arange(1, M + 1)
        if self.mode == "resonant":
            p, q = self.pq
            m1 = m[m % q != 0]
            m2 = np.arange(1, int(M * p / q) + 1 + p)
            m2 = m2[m2 % p != 0]
            j = np.arange(1, M // q + 2)
            self.res_j = j
            self.res_coeff_const = ((p + q) / (2.0 * j * p * q)
                                    + 1.0 / (2j * np.pi * j * j * p * q))
            self.res_coeff_lin = -1.0 / (j * p * w1)
        else:
            m1 = m
            m2 = m
            self.res_j = None
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            d1 = 1.0 / (1.0 - np.exp(2j * np.pi * m1 * w2 / w1))
            d2 = 1.0 / (1.0 - np.exp(2j * np.pi * m2 * w1 / w2))
        self.m1, self.m2 = m1, m2
        self.inv_den1 = np.nan_to_num(d1 / m1, nan=0.0, posinf=0.0, neginf=0.0)
        self.inv_den2 = np.nan_to_num(d2 / m2, nan=0.0, posinf=0.0, neginf=0.0)

    # -- series path -------------------------------------------------------

    def _b22(self, z: np.ndarray) -> np.ndarray:
        w1, w2 = self.w1, self.w2
        return (z * z - self.sigma * z
                + (w1 * w1 + 3 * w1 * w2 + w2 * w2) / 6) / (w1 * w2)

    def _series_upper(self, z: np.ndarray) -> np.ndarray:
        """log S2 for points with decay exponents above the threshold."""
        return self._series_log_at(z)

    def _decay(self, z: np.ndarray) -> np.ndarray:
        u1 = (z / self.w1).imag + self.pen1
        u2 = (z / self.w2).imag + self.pen2
        return np.minimum(u1, u2)

    # -- band path ----------------------------------------------------------

    def _build_table(self, refine: int = 0):
        w1, w2 = self.w1, self.w2
        re_sigma = self.sigma.real
        s_min = min(w1.real, w2.real) / re_sigma
        self.band_hw = min(0.26, 0.5 * s_min + 1e-9)
        margin = 0.5 - self.band_hw
        decay = 2.0 * margin * re_sigma
        T = 40.0 / decay
        t0 = 0.05
        h = min(1.0, 0.8 * np.pi / max(abs(w1), abs(w2))) / (2 ** refine)
        edges = [t0]
        t = t0
        ratio = 1.6 ** (1.0 / (2 ** refine))
        while t < 1.0:
            t = min(t * ratio, 1.0)
            edges.append(t)
        while t < T:
            t = min(t + h, T)
            edges.append(t)
        edges = np.asarray(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        sh = np.sinh(w1 * nodes) * np.sinh(w2 * nodes)
        W = wts / (2 * nodes * sh)
        V = np.sum(wts / (2 * w1 * w2 * nodes ** 2)) + 1 / (2 * w1 * w2 * T)
        # Taylor section on [0, t0]: head(a) = a * sum_j h_j (a^2)^j
        e1 = _CSCH * (w1 ** 2) ** np.arange(7)
        e2 = _CSCH * (w2 ** 2) ** np.arange(7)
        e = np.convolve(e1, e2)[:7]
        ck = np.array([t0 ** (2 * k - 1) / (2 * k - 1) for k in range(1, 7)])
        hj = np.zeros(7, dtype=complex)
        for jj in range(7):
            acc = 0.0 + 0.0j
            for k in range(max(jj, 1), 7):
                if k - jj < 7 and k >= 1 and k <= 6:
                    acc += e[k - jj] * ck[k - 1]
            hj[jj] = acc / (2 * w1 * w2) / math.factorial(2 * jj + 1)
        return {"nodes": nodes, "W": W, "V": V, "hj": hj, "t0": t0, "T": T,
                "decay": decay}

    def table(self):
        if self._table is None:
            for refine in range(3):
                tab = self._build_table(refine)
                if self._validate_table(tab, refine):
                    break
            self._table = tab
        return self._table

    def _validate_table(self, tab, refine) -> bool:
        fine = self._build_table(refine + 1)
        zs = np.array([0.5 * self.sigma,
                       (0.5 + 0.8 * self.band_hw) * self.sigma.real + 0.3j,
                       (0.5 - 0.8 * self.band_hw) * self.sigma.real - 0.4j])
        coarse_v = self._table_eval(zs, tab)
        fine_v = self._table_eval(zs, fine)
        err = float(np.max(np.abs(coarse_v - fine_v)))
        self.table_error = max(err, 1e-15)
        return err <= _TABLE_TARGET

    def _table_eval(self, z: np.ndarray, tab) -> np.ndarray:
        a = 2 * z - self.sigma
        main = np.sinh(np.multiply.outer(a, tab["nodes"])) @ tab["W"] - a * tab["V"]
        a2 = a * a
        head = np.zeros_like(a)
        for hj in tab["hj"][::-1]:
            head = head * a2 + hj
        return main + head * a

    def _band_log(self, z: np.ndarray) -> np.ndarray:
        """Shift Re z into the centered strip band, then table-evaluate."""
        tab = self.table()
        z = z.copy()
        re_sigma = self.sigma.real
        pos = z.real / re_sigma
        logfac = np.zeros(len(z), dtype=complex)
        steps = (w1s, w2s) = (self.w1.real / re_sigma, self.w2.real / re_sigma)
        big, small = (self.w1, self.w2) if w1s >= w2s else (self.w2, self.w1)
        sbig, ssml = max(steps), min(steps)
        lo, hi = 0.5 - self.band_hw, 0.5 + self.band_hw
        guard = _POLE_GUARD_REL
        for _ in range(_MAX_SHIFTS):
            pos = z.real / re_sigma
            out_hi = pos > hi + 1e-12
            out_lo = pos < lo - 1e-12
            if not (out_hi.any() or out_lo.any()):
                break
            if out_hi.any():
                use_big = out_hi & (pos - sbig >= lo - 1e-12)
                use_sml = out_hi & ~use_big
                for mask, w in ((use_big, big), (use_sml, small)):
                    if not mask.any():
                        continue
                    other = self.w2 if w is self.w1 else self.w1
                    znew = z[mask] - w
                    fac = _log_2sin(np.pi * znew / other)
                    # division by the sin factor: a vanishing factor is a pole
                    if np.any(np.exp(fac.real) < guard):
                        raise PoleProximity(
                            "argument within guard distance of a pole of S2")
                    z[mask] = znew
                    logfac[mask] -= fac
            if out_lo.any():
                pos = z.real / re_sigma
                out_lo = pos < lo - 1e-12
                use_big = out_lo & (pos + sbig <= hi + 1e-12)
                use_sml = out_lo & ~use_big
                for mask, w in ((use_big, big), (use_sml, small)):
                    if not mask.any():
                        continue
                    other = self.w2 if w is self.w1 else self.w1
                    fac = _log_2sin(np.pi * z[mask] / other)
                    z[mask] = z[mask] + w
                    logfac[mask] += fac
        else:
            raise PrecisionLoss(f"strip reduction exceeded {_MAX_SHIFTS} shifts")
        if np.any(np.abs(logfac.real) > 600):
            raise PrecisionLoss("sin-factor accumulation exceeds the exponent budget")
        return self._table_eval(z, tab) + logfac

    # -- public core ---------------------------------------------------------

    def log_s2_normalized(self, z: np.ndarray) -> np.ndarray:
        out = np.empty(len(z), dtype=complex)
        up = self._decay(z) >= _SERIES_THRESHOLD
        dn = self._decay(self.sigma - z) >= _SERIES_THRESHOLD
        if self.mode == "table-only":
            up = np.zeros(len(z), dtype=bool)
            dn = up
            band_limit = 2.0
            if np.any(np.abs(z.imag) > band_limit):
                raise PrecisionLoss(
                    "periods are near but not at a rational ratio; large "
                    "imaginary arguments are outside the reliable domain")
        dn &= ~up
        band = ~(up | dn)
        if up.any():
            out[up] = self._series_upper(z[up])
        if dn.any():
            out[dn] = -self._series_upper(self.sigma - z[dn])
        if band.any():
            out[band] = self._band_log(z[band])
        return out

    def log_s2(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        flat = self.log_s2_normalized(z.ravel() * self.scale)
        return flat.reshape(z.shape)

    # -- structured fast path: arguments z = i*d + c with real d ------------

    @staticmethod
    def _horner_series(s: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
        """sum_{m=1..M} coeffs[m-1] * s^m via Horner."""
        acc = np.zeros_like(s)
        for c in coeffs[::-1]:
            acc = (acc + c) * s
        return acc

    @staticmethod
    def _pow_int(t: np.ndarray, k: int) -> np.ndarray:
        if k == 1:
            return t
        if k == 2:
            return t * t
        return t ** k

    def _series_poly_terms(self, zt, t1, t2):
        """Series sum given zt (normalized points) and the per-family bases
        t_j = exp(2 pi i zt / w_j).  Split sparsely: the leading term of each
        family suffices once |t| is tiny; the full Horner runs only near the
        band threshold.  |zt| is bounded by ~60 here, so a leading-term
        cutoff of 1e-9 keeps the dropped remainder below 1e-16."""
        acc = np.zeros_like(zt)
        if self.inv_den1.size:
            acc = acc + self._pow_int(t1, int(self.m1[0])) * self.inv_den1[0]
        if self.inv_den2.size:
            acc = acc + self._pow_int(t2, int(self.m2[0])) * self.inv_den2[0]
        if self.res_j is not None:
            q = self.pq[1]
            sq = self._pow_int(t1, q)
            acc = acc + sq * (self.res_coeff_const[0]
                              + self.res_coeff_lin[0] * zt)
        need = (np.abs(t1) > 1e-9) | (np.abs(t2) > 1e-9)
        if np.any(need):
            s1, s2 = t1[need], t2[need]
            full = np.zeros_like(s1)
            if self.inv_den1.size:
                c1 = np.zeros(int(self.m1[-1]), dtype=complex)
                c1[self.m1 - 1] = self.inv_den1
                full = full + self._horner_series(s1, c1)
            if self.inv_den2.size:
                c2 = np.zeros(int(self.m2[-1]), dtype=complex)
                c2[self.m2 - 1] = self.inv_den2
                full = full + self._horner_series(s2, c2)
            if self.res_j is not None:
                q = self.pq[1]
                sr = self._pow_int(s1, q)
                full = full + self._horner_series(sr, self.res_coeff_const) \
                    + self._horner_series(sr, self.res_coeff_lin) * zt[need]
            acc[need] = full
        return acc

    def _series_from_bases(self, zt, t1, t2):
        return 0.5j * np.pi * self._b22(zt) - self._series_poly_terms(zt, t1, t2)

    def _series_log_at(self, zt):
        """Upper-half series at arbitrary normalized points (vectorized)."""
        with np.errstate(over="ignore", invalid="ignore"):
            t1 = np.exp(2j * np.pi * zt / self.w1)
            t2 = np.exp(2j * np.pi * zt / self.w2)
            return self._series_from_bases(zt, t1, t2)

    def band_table_for(self, c: complex):
        """Interpolation table for the band along i*d + c, or None when the
        line runs too close to a lattice point for tabulation (the caller
        then evaluates band points through the exact path)."""
        key = complex(c)
        cache = getattr(self, "_line_tables", None)
        if cache is None:
            cache = {}
            self._line_tables = cache
        if key not in cache:
            try:
                cache[key] = _LineTable(self, key)
            except PrecisionLoss:
                cache[key] = None
        return cache[key]

    def _diff_thresholds(self, c_norm: complex) -> tuple[float, float]:
        """Bounds on normalized d with z = i d + c so that the upper series
        (d >= hi) or the reflected series (d <= lo) is machine-converged."""
        y0 = _SERIES_THRESHOLD
        his, los = [], []
        for wj, pen in ((self.w1, self.pen1), (self.w2, self.pen2)):
            r = (1j / wj).imag  # Im(i/wj) = Re(1/wj) > 0
            his.append((y0 - pen - (c_norm / wj).imag) / r)
            los.append(-(y0 - pen - ((self.sigma - c_norm) / wj).imag) / r)
        return max(los), max(his)

    def log_s2_idiff(self, d: np.ndarray, c: complex) -> np.ndarray:
        """log S2(i*d + c) for a real array d of any shape; c fixed.

        Series evaluation away from the real-period band, cached cubic
        interpolation of the 1D section inside it.
        """
        d = np.asarray(d, dtype=float)
        dn = d.reshape(-1) * self.scale
        cn = complex(c) * self.scale
        lo, hi = self._diff_thresholds(cn)
        out = np.empty(dn.shape, dtype=complex)
        if self.mode == "table-only":
            up = np.zeros(dn.shape, dtype=bool)
            down = up
        else:
            up = dn >= hi
            down = dn <= lo
        band = ~(up | down)
        with np.errstate(over="ignore", invalid="ignore"):
            if up.any():
                out[up] = self._series_log_at(1j * dn[up] + cn)
            if down.any():
                out[down] = -self._series_log_at(self.sigma - 1j * dn[down] - cn)
        if band.any():
            tab = self.band_table_for(complex(c))
            if tab is not None:
                out[band] = tab.eval(d.reshape(-1)[band])
            else:
                out[band] = self.log_s2_normalized(1j * dn[band] + cn)
        return out.reshape(d.shape)

    def log_s2_idiff_grid(self, u: np.ndarray, w: np.ndarray,
                          c: complex) -> np.ndarray:
        """log S2(i(u_i - w_k) + c) as an (N, W) matrix.

        On a difference grid the series bases exp(2 pi i z/omega_j) factor
        into per-axis exponentials, so only O(N + W) transcendental calls
        are needed; everything else is outer products and the Horner pass.
        """
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        un, wn = u * self.scale, w * self.scale
        cn = complex(c) * self.scale
        span = float(max(np.max(np.abs(un), initial=0.0),
                         np.max(np.abs(wn), initial=0.0)))
        if self.mode == "table-only" or 2 * np.pi * span / min(
                abs(self.w1), abs(self.w2)) > 640.0:
            return self.log_s2_idiff(u[:, None] - w[None, :], c)
        dn = un[:, None] - wn[None, :]
        lo, hi = self._diff_thresholds(cn)
        flat = dn.reshape(-1)
        up = flat >= hi
        down = flat <= lo
        band = ~(up | down)
        out = np.empty(flat.shape, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            bases = []
            for wj in (self.w1, self.w2):
                a = np.exp(-2 * np.pi * un / wj)
                b = np.exp(2 * np.pi * wn / wj)
                k_up = np.exp(2j * np.pi * cn / wj)
                k_dn = np.exp(2j * np.pi * (self.sigma - cn) / wj)
                bases.append((a, b, k_up, k_dn))
            if up.any():
                zu = 1j * flat[up] + cn
                t = [(k_up * (a[:, None] * b[None, :]).reshape(-1)[up])
                     for (a, b, k_up, _) in bases]
                out[up] = self._series_from_bases(zu, t[0], t[1])
            if down.any():
                zr = self.sigma - 1j * flat[down] - cn
                t = [(k_dn * ((1 / a)[:, None] * (1 / b)[None, :]).reshape(-1)[down])
                     for (a, b, _, k_dn) in bases]
                out[down] = -self._series_from_bases(zr, t[0], t[1])
        if band.any():
            tab = self.band_table_for(complex(c))
            if tab is not None:
                out[band] = tab.eval((u[:, None] - w[None, :]).reshape(-1)[band])
            else:
                out[band] = self.log_s2_normalized(1j * dn.reshape(-1)[band] + cn)
        return out.reshape(dn.shape)


class _LineTable:
    """Cubic-interpolation table for d -> log S2(i d + c) on the band."""

    def __init__(self, eng: _S2Engine, c: complex):
        cn = c * eng.scale
        lo, hi = eng._diff_thresholds(cn)
        pad = 0.05
        self.lo = (lo - pad) / eng.scale
        self.hi = (hi + pad) / eng.scale
        rng = np.random.default_rng(0)
        probe = np.concatenate([
            rng.uniform(self.lo, self.hi, 32),
            np.linspace(0.35 * self.lo, 0.35 * self.hi, 40),
        ])
        exact = eng.log_s2_normalized((1j * probe + c) * eng.scale)
        h = 1e-3 / eng.scale
        while True:
            n = int(math.ceil((self.hi - self.lo) / h)) + 4
            if n > 300_000:
                raise PrecisionLoss(
                    f"line i*d + {c} too close to a lattice point to tabulate")
            self.h = (self.hi - self.lo) / (n - 3)
            self.d0 = self.lo - self.h
            grid = self.d0 + self.h * np.arange(n)
            vals = eng.log_s2_normalized(
                (1j * grid + c) * eng.scale).astype(complex)
            if not np.all(np.isfinite(vals)):
                raise PrecisionLoss(
                    f"the line i*d + {c} passes through a pole or zero")
            # the reduction can change log branch between neighbours; unwrap
            # so that the interpolated section is continuous (exp-equivalent)
            self.vals = vals.real + 1j * np.unwrap(vals.imag)
            self.n = n
            err = float(np.max(np.abs(np.expm1(self.eval(probe) - exact))))
            if err <= 4e-12:
                return
            h /= 2

    def eval(self, d: np.ndarray) -> np.ndarray:
        s = (np.asarray(d, dtype=float) - self.d0) / self.h
        idx = np.clip(s.astype(int), 1, self.n - 3)
        t = s - idx
        vm, v0, v1, v2 = (self.vals[idx - 1], self.vals[idx],
                          self.vals[idx + 1], self.vals[idx + 2])
        return (vm * (-t * (t - 1) * (t - 2) / 6)
                + v0 * ((t * t - 1) * (t - 2) / 2)
                + v1 * (-t * (t + 1) * (t - 2) / 2)
                + v2 * (t * (t * t - 1) / 6))


@lru_cache(maxsize=64)
def _engine(omega1: complex, omega2: complex) -> _S2Engine:
    return _S2Engine(omega1, omega2)


def engine_for(p: Params) -> _S2Engine:
    return _engine(complex(p.omega1), complex(p.omega2))


def _as_array(z) -> tuple[np.ndarray, bool]:
    scalar = np.isscalar(z) or (isinstance(z, np.ndarray) and z.ndim == 0)
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    return arr, scalar


def log_s2(z, p: Params):
    """log S2(z | omega); branch unspecified but exp-consistent per point."""
    arr, scalar = _as_array(z)
    out = engine_for(p).log_s2(arr)
    return complex(out[0]) if scalar else out


def s2(z, p: Params):
    """The double sine function itself; scalar in, scalar out."""
    arr, scalar = _as_array(z)
    eng = engine_for(p)
    guard = _POLE_GUARD_REL * abs(p.omega1 + p.omega2)
    zero = np.abs(arr) < guard
    with np.errstate(over="ignore"):
        vals = np.exp(eng.log_s2(arr))
    vals[zero] = 0.0
    return complex(vals[0]) if scalar else vals


def log_s2_strip(z: complex, p: Params, q: QuadratureSpec | None = None,
                 margin: float | None = None) -> complex:
    """log S2 for z in the open strip 0 < Re z < Re(omega1 + omega2).

    The removable singularity of the integral representation at the origin
    is handled by a Taylor section; the evaluation itself shares the cached
    panel table, so the spec only bounds the accepted error.
    """
    q = q or QuadratureSpec(tolerance=1e-11)
    sigma_re = (p.omega1 + p.omega2).real
    margin = margin if margin is not None else 1e-9 * sigma_re
    zr = complex(z).real
    if not (margin < zr < sigma_re - margin):
        raise StripViolation(
            f"Re z = {zr} outside the open strip (0, {sigma_re})")
    eng = engine_for(p)
    eng.table()
    if eng.table_error > q.tolerance:
        raise QuadratureFailure(
            f"table error {eng.table_error:.2e} above tolerance {q.tolerance:.2e}")
    return complex(eng.log_s2(np.array([z]))[0])


def strip_point(z: complex, p: Params) -> StripPoint:
    return StripPoint(z, complex(z).real / (p.omega1 + p.omega2).real)


def s2_residue(idx: PoleZeroIndex, p: Params) -> complex:
    """Residue of S2 at pole z_{m,k} or of 1/S2 at zero z_{-m,-k}.

    Product formulas assume the target pole/zero is simple; at rationally
    related periods a colliding lattice point makes a sin factor vanish and
    the request is rejected.
    """
    w1, w2 = p.omega1, p.omega2
    lead = np.sqrt(w1 * w2) / (2 * np.pi)
    m, k = idx.m, idx.k
    if idx.kind == "pole":
        sign = (-1.0) ** (m * k)
        s_rng, l_rng = range(1, m), range(1, k)
    else:
        sign = (-1.0) ** (m * k + m + k)
        s_rng, l_rng = range(1, m + 1), range(1, k + 1)
    denom = 1.0 + 0.0j
    for s in s_rng:
        denom *= 2 * np.sin(np.pi * s * w1 / w2)
    for l in l_rng:
        denom *= 2 * np.sin(np.pi * l * w2 / w1)
    if abs(denom) < 1e-12:
        raise PoleProximity(
            "residue formula degenerates: another lattice point collides "
            "with this one (rationally related periods)")
    return lead * sign / denom


def s2_asymptotic(z: complex, p: Params, *, min_distance: float = 3.0) -> complex:
    """Leading asymptotic of the ratio S2(z)/S2(z+g) away from the cones.

    Returns exp(-i pi ghat (z - gstar/2)) in the component of the cone
    complement containing +i*infinity and the opposite sign in the other
    component; between them (inside the cones) no asymptotic applies.
    """
    z = complex(z)
    w1, w2 = p.omega1, p.omega2
    s1, s2_ = np.angle(complex(w1)), np.angle(complex(w2))
    if s1 < s2_:
        s1, s2_ = s2_, s1
    theta = np.angle(z)
    alpha = (theta - s1) % (2 * np.pi)
    width = np.pi + s2_ - s1      # angular width of each complement component
    cone = s1 - s2_               # angular width of each cone
    beta = alpha - width - cone   # angle measured from the lower component edge
    if 0 < alpha < width:
        sign, edge_dist = -1.0, min(alpha, width - alpha)
    elif 0 < beta < width:
        sign, edge_dist = +1.0, min(beta, width - beta)
    else:
        raise ConeProximity("argument lies inside the pole/zero cones")
    d = abs(z) * math.sin(min(edge_dist, 0.5 * np.pi))
    if d < min_distance:
        raise ConeProximity(
            f"distance {d:.3g} to the cones below threshold {min_distance}")
    return complex(np.exp(sign * 1j * np.pi * p.ghat * (z - p.gstar / 2)))
