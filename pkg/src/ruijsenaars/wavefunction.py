"""The wave function built recursively by raising operators.

    psi_{l_1}(x_1) = e^{2 pi i l_1 x_1}
    psi_{l_n}(x_n) = int dy_{n-1}  d_{n-1} e^{2 pi i l_n (sum x - sum y)}
                     K(x_n, y_{n-1}) mu(y_{n-1}) psi_{l_{n-1}}(y_{n-1})

n = 2 reduces to a single Fourier-type integral, n = 3 to a nested 2 + 1
dimensional one; both are evaluated on shared Gauss-Legendre grids with the
kernel matrices reused across tensor points (everything becomes matrix
products).  n = 4 falls back to Monte Carlo on the explicit 6-dimensional
representation.

The same grid evaluators back the operator and pairing modules: these are
the `psi2_on_grid` family below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionViolation, DimensionTooLarge
from .kernels import (KernelContext, kernel_K, kernel_K_grid, log_measure_mu,
                      measure_mu, mu_pair_grid, norm_d, product_K, product_mu)
from .quadrature import (IntegralResult, QuadratureSpec, integrate_nd,
                         truncation_radius)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

_DEFAULT_TOL = {1: 1e-12, 2: 1e-9, 3: 1e-7, 4: 1e-2}


@dataclass(frozen=True)
class SpectralVector:
    """Ordered spectral tuple: real parts plus one shared imaginary shift."""

    values: tuple
    uniform_imag_shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @staticmethod
    def from_values(vals) -> "SpectralVector":
        arr = np.asarray(vals, dtype=complex)
        if arr.size and np.ptp(arr.imag) > 1e-12:
            raise ConditionViolation(
                "spectral tuple entries must share one imaginary part")
        shift = float(arr.imag[0]) if arr.size else 0.0
        return SpectralVector(tuple(arr.real.tolist()), shift)

    @property
    def complex_values(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float) + 1j * self.uniform_imag_shift

    def __len__(self) -> int:
        return len(self.values)

    def shifted(self, delta: complex) -> "SpectralVector":
        delta = complex(delta)
        return SpectralVector(tuple(v + delta.real for v in self.values),
                              self.uniform_imag_shift + delta.imag)


@dataclass(frozen=True)
class CoordinateVector:
    """Ordered coordinate tuple (finite reals)."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


def _spectral(lams, ctx: KernelContext) -> np.ndarray:
    if isinstance(lams, SpectralVector):
        sv = lams
    else:
        sv = SpectralVector.from_values(lams)
    if abs(sv.uniform_imag_shift) >= 0.5 * ctx.params.nu_g:
        raise ConditionViolation(
            f"|imaginary shift| = {abs(sv.uniform_imag_shift):.4g} must stay "
            f"below nu_g/2 = {0.5 * ctx.params.nu_g:.4g}")
    return sv.complex_values


def _coords(xs) -> np.ndarray:
    if isinstance(xs, CoordinateVector):
        return np.asarray(xs.values, dtype=complex)
    return np.asarray(xs, dtype=complex)


def lambda_kernel(x_n, y_prev, lam: complex, ctx: KernelContext) -> complex:
    """Kernel of the raising operator from n-1 to n = len(x_n) coordinates."""
    x = _coords(x_n)
    y = _coords(y_prev)
    n = x.size
    if y.size != n - 1:
        raise ValueError("y tuple must have one entry fewer than x")
    phase = np.exp(2j * np.pi * lam * (np.sum(x) - np.sum(y)))
    return (norm_d(n - 1, ctx) * phase * product_K(x, y, ctx)
            * product_mu(y, ctx))


# ---------------------------------------------------------------------------
# grid evaluators


def _pair_nodes(lo: float, hi: float, n_panels: int):
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return nodes, wts


def _inner_interval(ctx, points, tol, extra_amp=1.0, rate=None):
    if rate is None:
        rate = 2 * np.pi * ctx.params.nu_g
    re = np.concatenate([np.atleast_1d(p).real for p in points])
    im = np.concatenate([np.atleast_1d(p).imag for p in points])
    amp_im = math.exp(np.pi * ctx.params.nu_g * float(np.max(np.abs(im), initial=0.0)))
    k0 = abs(kernel_K(0.0, ctx))
    r = truncation_radius(rate, 20.0 * k0 ** 2 * amp_im * extra_amp, tol)
    return float(np.min(re)) - r, float(np.max(re)) + r


def _converge_grid(build, tol: float, start_panels: int, max_panels: int = 4096):
    """Double panel counts until the built grid stabilizes in max norm."""
    n = start_panels
    prev = build(n)
    while True:
        n *= 2
        cur = build(n)
        scale = float(np.max(np.abs(cur))) + 1e-300
        diff = float(np.max(np.abs(cur - prev))) / scale
        if diff <= tol or n >= max_panels:
            return cur
        prev = cur


def psi2_on_grid(lams, u, v, ctx: KernelContext, tol: float = 1e-9) -> np.ndarray:
    """Two-particle wave function on the tensor grid u x v of coordinates."""
    lam = np.asarray(lams, dtype=complex)
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    nu = lam[0] - lam[1]
    nu_g = ctx.params.nu_g
    if abs(nu.imag) >= 0.95 * nu_g:
        raise ConditionViolation(
            f"|Im(l1 - l2)| = {abs(nu.imag):.4g} too close to nu_g = {nu_g:.4g}; "
            "the defining integral stops converging")
    rate = 2 * np.pi * (nu_g - abs(nu.imag))
    lo, hi = _inner_interval(ctx, (u, v), tol, rate=rate)
    osc = max(abs(nu.real), 1.0)
    start = max(4, int(math.ceil((hi - lo) * osc * 8 / 16)))
    same = u is v or (u.shape == v.shape and np.array_equal(u, v))

    u_real = bool(np.all(u.imag == 0.0))
    v_real = bool(np.all(v.imag == 0.0))

    def build(n_panels):
        w, wt = _pair_nodes(lo, hi, n_panels)
        a = kernel_K_grid(u.real, w, ctx) if u_real \
            else kernel_K(u[:, None] - w[None, :], ctx)
        if same:
            b = a
        else:
            b = kernel_K_grid(v.real, w, ctx) if v_real \
                else kernel_K(v[:, None] - w[None, :], ctx)
        c = wt * np.exp(2j * np.pi * nu * w)
        return (a * c) @ b.T

    g = _converge_grid(build, tol, start)
    pref = norm_d(1, ctx) * np.exp(2j * np.pi * lam[1] * (u[:, None] + v[None, :]))
    return pref * g


def psi2_on_spectral_grid(l1, l2, x_pair, ctx: KernelContext,
                          tol: float = 1e-9) -> np.ndarray:
    """Two-particle wave function on the tensor grid l1 x l2 of spectra."""
    l1 = np.atleast_1d(np.asarray(l1, dtype=complex))
    l2 = np.atleast_1d(np.asarray(l2, dtype=complex))
    x1, x2 = (complex(t) for t in x_pair)
    lo, hi = _inner_interval(ctx, (np.array([x1, x2]),), tol)
    osc = float(np.max(np.abs(np.concatenate([l1.real, l2.real]))) + 1.0)
    start = max(4, int(math.ceil((hi - lo) * osc * 8 / 16)))

    def build(n_panels):
        w, wt = _pair_nodes(lo, hi, n_panels)
        c = wt * kernel_K(x1 - w, ctx) * kernel_K(x2 - w, ctx)
        e1 = np.exp(2j * np.pi * np.multiply.outer(l1, w))
        e2 = np.exp(-2j * np.pi * np.multiply.outer(l2, w))
        return (e1 * c) @ e2.T

    g = _converge_grid(build, tol, start)
    return norm_d(1, ctx) * np.exp(2j * np.pi * l2[None, :] * (x1 + x2)) * g


def psi3_on_grid(lams, u, v, x3, ctx: KernelContext, tol: float = 1e-7,
                 inner_tol: float | None = None) -> np.ndarray:
    """Three-particle wave function on u x v with the third coordinate fixed."""
    lam = np.asarray(lams, dtype=complex)
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    x3 = complex(x3)
    inner_tol = inner_tol if inner_tol is not None else tol / 10
    lo, hi = _inner_interval(ctx, (u, v, np.array([x3])), tol, extra_amp=10.0)
    osc = max(abs(lam[2].real), abs(lam[0].real - lam[1].real), 1.0)
    start = max(6, int(math.ceil((hi - lo) * osc * 8 / 16)))
    same = u.shape == v.shape and np.array_equal(u, v)

    u_real = bool(np.all(u.imag == 0.0))
    v_real = bool(np.all(v.imag == 0.0))

    def build(n_panels):
        s, wt = _pair_nodes(lo, hi, n_panels)
        psi2 = psi2_on_grid(lam[:2], s, s, ctx, inner_tol)
        mu2 = mu_pair_grid(s, s, ctx)
        kx = kernel_K(x3 - s, ctx)
        es = np.exp(-2j * np.pi * lam[2] * s)
        c = (wt * kx * es)[:, None] * (wt * kx * es)[None, :] * mu2 * psi2 / 2.0
        au = kernel_K_grid(u.real, s, ctx) if u_real \
            else kernel_K(u[:, None] - s[None, :], ctx)
        if same:
            av = au
        else:
            av = kernel_K_grid(v.real, s, ctx) if v_real \
                else kernel_K(v[:, None] - s[None, :], ctx)
        out = np.empty((u.size, v.size), dtype=complex)
        block = max(1, int(2e7) // (s.size * max(v.size, 1)))
        for i0 in range(0, u.size, block):
            d = au[i0:i0 + block, None, :] * av[None, :, :]   # (B, Nv, S)
            dc = np.tensordot(d, c, axes=([2], [0]))          # (B, Nv, S)
            out[i0:i0 + block] = np.sum(dc * d, axis=2)
        return out

    g = _converge_grid(build, tol, start, max_panels=512)
    pref = norm_d(2, ctx) * np.exp(
        2j * np.pi * lam[2] * (u[:, None] + v[None, :] + x3))
    return pref * g


# ---------------------------------------------------------------------------
# point evaluation


def psi(lambda_n, x_n, ctx: KernelContext,
        spec: QuadratureSpec | None = None) -> complex:
    """Evaluate the n-particle wave function at one point.

    `lambda_n` is a SpectralVector or a sequence of complex numbers sharing
    one imaginary part; `x_n` is a CoordinateVector (real) or, for analytic
    continuation inside the kernel strips, a sequence of complex numbers.
    Deterministic quadrature through n = 3; n = 4 uses seeded Monte Carlo.
    """
    lam = _spectral(lambda_n, ctx)
    return psi_values(lam, _coords(x_n), ctx, spec)


def psi_values(lam, x, ctx: KernelContext,
               spec: QuadratureSpec | None = None) -> complex:
    """Evaluate at raw complex tuples; used for analytic continuation.

    The spectral entries may carry unequal imaginary parts at n <= 2, where
    convergence only requires the pairwise spread to stay below nu_g.
    """
    lam = np.asarray(lam, dtype=complex)
    x = np.asarray(x, dtype=complex)
    n = x.size
    if lam.size != n:
        raise ValueError("spectral and coordinate tuples must have equal length")
    if n == 0:
        return 1.0 + 0.0j
    if n > 4:
        raise DimensionTooLarge("wave function implemented for n <= 4")
    tol = spec.tolerance if spec is not None else _DEFAULT_TOL[n]
    if n == 1:
        return complex(np.exp(2j * np.pi * lam[0] * x[0]))
    if n == 2:
        return complex(psi2_on_grid(lam, x[:1], x[1:2], ctx, tol)[0, 0])
    if n >= 3 and np.ptp(lam.imag) > 1e-12:
        raise ConditionViolation(
            "unequal spectral imaginary parts are only supported at n <= 2")
    if n == 3:
        return complex(psi3_on_grid(lam, x[:1], x[1:2], x[2], ctx, tol)[0, 0])
    return _psi4_mc(lam, x, ctx, spec)


def _psi4_mc(lam, x, ctx, spec: QuadratureSpec | None) -> complex:
    spec = spec or QuadratureSpec(scheme="monte-carlo", tolerance=1e-2,
                                  max_nodes=400_000)
    nu = ctx.params.nu_g
    center = float(np.mean(x.real))
    radius = float(np.ptp(x.real)) / 2 + truncation_radius(np.pi * nu, 50.0, 0.3)
    d1, d2, d3 = (norm_d(k, ctx) for k in (1, 2, 3))

    def integrand(pts):
        y1 = pts[:, 0:1]
        y2 = pts[:, 1:3]
        y3 = pts[:, 3:6]
        val = d1 * d2 * d3 * np.exp(2j * np.pi * (
            lam[3] * (np.sum(x) - y3.sum(axis=1))
            + lam[2] * (y3.sum(axis=1) - y2.sum(axis=1))
            + lam[1] * (y2.sum(axis=1) - y1.sum(axis=1))
            + lam[0] * y1.sum(axis=1)))
        val = val * _mc_product_K(x[None, :], y3, ctx) * _mc_mu(y3, ctx)
        val = val * _mc_product_K(y3, y2, ctx) * _mc_mu(y2, ctx)
        val = val * _mc_product_K(y2, y1, ctx)
        return val

    res = integrate_nd(integrand, 6, spec.with_(scheme="monte-carlo"),
                       decay_rates=np.pi * nu,
                       centers=np.full(6, center),
                       radii=[radius] * 6)
    return complex(res.value)


def _mc_product_K(a, b, ctx) -> np.ndarray:
    diffs = a[..., :, None] - b[..., None, :]
    flat = kernel_K(diffs.reshape(-1), ctx).reshape(diffs.shape)
    return np.prod(flat, axis=(-2, -1))


def _mc_mu(y, ctx) -> np.ndarray:
    m = y.shape[1]
    out = np.ones(y.shape[0], dtype=complex) / math.factorial(m)
    for i in range(m):
        for j in range(m):
            if i != j:
                out = out * measure_mu(y[:, i] - y[:, j], ctx)
    return out


def psi_dual(lambda_n, x_n, ctx: KernelContext,
             spec: QuadratureSpec | None = None) -> complex:
    """Evaluate through the dual representation: spectra and coordinates swap
    roles and the parameters are replaced by the dual triple."""
    lam = _spectral(lambda_n, ctx)
    x = _coords(x_n)
    dual_ctx = ctx.dual_context
    if abs(float(np.max(np.abs(x.imag), initial=0.0))) >= 0.5 * dual_ctx.params.nu_g:
        raise ConditionViolation("coordinate imaginary parts exceed the dual "
                                 "spectral-shift bound")
    return psi(SpectralVector.from_values(x), lam, dual_ctx, spec)
