"""Kernel function K, measure mu, their duals, products, and normalization.

    K(x)  = 1 / [ S2(ix + g*/2) S2(-ix + g*/2) ]      decays like e^{-pi nu_g |x|}
    mu(x) = S2(ix) / S2(ix + g)                       grows  like e^{+pi nu_g |x|}

Hatted versions are the same functions built on the dual parameter triple.
Multi-argument products follow the pair conventions: K over all (i, j) pairs
of two tuples, mu over ordered pairs within one tuple with a 1/n! prefactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .double_sine import engine_for, log_s2, s2
from .errors import CoincidentPoints, PoleProximity, StripViolation
from .params import Params, dualize

_STRIP_GUARD_REL = 1e-8   # times Re(g*), distance kept from kernel pole lines
_COINCIDENT_GUARD = 1e-9


@dataclass(frozen=True)
class KernelContext:
    """Parameter triple with its dual cached."""

    params: Params
    dual: Params = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.dual is None:
            object.__setattr__(self, "dual", dualize(self.params))

    @property
    def dual_context(self) -> "KernelContext":
        return KernelContext(self.dual, self.params)

    @property
    def decay_rate(self) -> float:
        """Envelope rate of |K|: pi * nu_g."""
        return math.pi * self.params.nu_g

    @property
    def hat_decay_rate(self) -> float:
        return math.pi * self.dual.nu_g


def context(omega1, omega2, g) -> KernelContext:
    from .params import validate
    return KernelContext(validate(omega1, omega2, g))


def _as_array(x):
    scalar = np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0)
    return np.atleast_1d(np.asarray(x, dtype=complex)), scalar


def log_kernel_K(x, ctx: KernelContext):
    """log K(x), vectorized; raises StripViolation outside |Im x| < Re(g*)/2."""
    p = ctx.params
    arr, scalar = _as_array(x)
    half = p.gstar.real / 2
    guard = _STRIP_GUARD_REL * p.gstar.real
    if np.any(np.abs(arr.imag) > half - guard):
        worst = float(np.max(np.abs(arr.imag)))
        raise StripViolation(
            f"|Im x| = {worst:.6g} outside kernel strip half-width "
            f"{half:.6g} (guard {guard:.2g})")
    eng = engine_for(p)
    if np.all(arr.imag == 0.0):
        re = arr.real
        out = -(eng.log_s2_idiff(re, p.gstar / 2)
                + eng.log_s2_idiff(-re, p.gstar / 2))
    else:
        out = -(eng.log_s2(1j * arr + p.gstar / 2)
                + eng.log_s2(-1j * arr + p.gstar / 2))
    return out[0] if scalar else out


def log_kernel_K_grid(u, w, ctx: KernelContext) -> np.ndarray:
    """log K(u_i - w_k) on the difference grid of two real arrays.

    Exploits the line structure of the double sine arguments, so large
    quadrature grids cost one cheap polynomial pass per element.
    """
    p = ctx.params
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    eng = engine_for(p)
    return -(eng.log_s2_idiff_grid(u, w, p.gstar / 2)
             + eng.log_s2_idiff_grid(w, u, p.gstar / 2).T)


def kernel_K_grid(u, w, ctx: KernelContext) -> np.ndarray:
    return np.exp(log_kernel_K_grid(u, w, ctx))


def mu_pair(d, ctx: KernelContext) -> np.ndarray:
    """mu(d) mu(-d) for a real array d (pointwise), 0 at coincidence."""
    p = ctx.params
    d = np.asarray(d, dtype=float)
    eng = engine_for(p)
    num = (4.0 * np.sinh(np.pi * d / p.omega1)
           * np.sinh(np.pi * d / p.omega2))
    den = eng.log_s2_idiff(d, p.g) + eng.log_s2_idiff(-d, p.g)
    with np.errstate(over="ignore", invalid="ignore"):
        out = num * np.exp(-den)
    return np.where(d == 0.0, 0.0, out)


def hat_mu_pair(d, ctx: KernelContext) -> np.ndarray:
    return mu_pair(d, ctx.dual_context)


def mu_pair_grid(u, v, ctx: KernelContext) -> np.ndarray:
    """mu(u_i - v_k) mu(v_k - u_i) on the difference grid of two real arrays.

    The numerator pair collapses by the reflection identity
    S2(z) S2(-z) = -4 sin(pi z/omega_1) sin(pi z/omega_2), so only the
    g-shifted denominators need the double sine; entries with u_i = v_k
    evaluate to 0 (the measure zero).
    """
    p = ctx.params
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = u[:, None] - v[None, :]
    eng = engine_for(p)
    num = (4.0 * np.sinh(np.pi * d / p.omega1)
           * np.sinh(np.pi * d / p.omega2))
    den = (eng.log_s2_idiff_grid(u, v, p.g)
           + eng.log_s2_idiff_grid(v, u, p.g).T)
    with np.errstate(over="ignore", invalid="ignore"):
        out = num * np.exp(-den)
    return np.where(d == 0.0, 0.0, out)


def kernel_K(x, ctx: KernelContext):
    out = np.exp(log_kernel_K(x, ctx))
    return complex(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def log_measure_mu(x, ctx: KernelContext):
    """log mu(x); -inf at the zero x = 0."""
    p = ctx.params
    arr, scalar = _as_array(x)
    eng = engine_for(p)
    zero = np.abs(arr) < 1e-300
    safe = np.where(zero, 1.0, arr)
    out = eng.log_s2(1j * safe) - eng.log_s2(1j * safe + p.g)
    out[zero] = -np.inf
    return out[0] if scalar else out


def measure_mu(x, ctx: KernelContext):
    arr, scalar = _as_array(x)
    with np.errstate(over="ignore"):
        out = np.exp(log_measure_mu(arr, ctx))
    return complex(out[0]) if scalar else out


def hat_K(lam, ctx: KernelContext):
    """Dual kernel: K built on the dual triple; decays like e^{-pi nu (g*) |l|}."""
    return kernel_K(lam, ctx.dual_context)


def log_hat_K(lam, ctx: KernelContext):
    return log_kernel_K(lam, ctx.dual_context)


def log_hat_K_shifted(w, shift: complex, ctx: KernelContext) -> np.ndarray:
    """log Khat(w + shift) for a real array w and a fixed complex shift.

    The double sine arguments lie on lines i*w + const, so the structured
    evaluator applies; this keeps the delta-sequence integrands cheap.
    """
    dp = ctx.dual
    w = np.asarray(w, dtype=float)
    half = dp.gstar.real / 2
    guard = _STRIP_GUARD_REL * dp.gstar.real
    if abs(complex(shift).imag) > half - guard:
        raise StripViolation("shift outside the dual kernel strip")
    eng = engine_for(dp)
    c = dp.gstar / 2
    return -(eng.log_s2_idiff(w, 1j * shift + c)
             + eng.log_s2_idiff(-w, -1j * shift + c))


def hat_mu(lam, ctx: KernelContext):
    return measure_mu(lam, ctx.dual_context)


def log_hat_mu(lam, ctx: KernelContext):
    return log_measure_mu(lam, ctx.dual_context)


def product_K(x_n, y_m, ctx: KernelContext) -> complex:
    """prod_{i,j} K(x_i - y_j); empty tuples give 1."""
    x_n = np.asarray(x_n, dtype=complex)
    y_m = np.asarray(y_m, dtype=complex)
    if x_n.size == 0 or y_m.size == 0:
        return 1.0 + 0.0j
    diffs = (x_n[:, None] - y_m[None, :]).ravel()
    try:
        logs = log_kernel_K(diffs, ctx)
    except StripViolation as exc:
        i, j = _offending_pair(x_n, y_m, ctx)
        raise StripViolation(f"pair (i={i}, j={j}): {exc}") from exc
    return complex(np.exp(np.sum(logs)))


def _offending_pair(x_n, y_m, ctx):
    half = ctx.params.gstar.real / 2
    guard = _STRIP_GUARD_REL * ctx.params.gstar.real
    for i, xi in enumerate(x_n):
        for j, yj in enumerate(y_m):
            if abs((xi - yj).imag) > half - guard:
                return i, j
    return -1, -1


def product_mu(x_n, ctx: KernelContext) -> complex:
    """(1/n!) prod_{i != j} mu(x_i - x_j).

    For real parameters and real coordinates the ordered pairs combine to
    |mu|^2 factors, so the value is computed as an exactly nonnegative real.
    """
    x_n = np.asarray(x_n, dtype=complex)
    n = x_n.size
    if n <= 1:
        return 1.0 + 0.0j
    iu, ju = np.triu_indices(n, k=1)
    diffs = x_n[iu] - x_n[ju]
    if np.any(np.abs(diffs) < _COINCIDENT_GUARD):
        raise CoincidentPoints("coordinates closer than the guard distance")
    fact = math.factorial(n)
    if ctx.params.is_real and np.all(x_n.imag == 0):
        vals = measure_mu(diffs, ctx)
        return complex(np.prod(np.abs(vals) ** 2) / fact)
    logs = log_measure_mu(diffs, ctx) + log_measure_mu(-diffs, ctx)
    return complex(np.exp(np.sum(logs)) / fact)


def product_hat_K(lam_n, gam_m, ctx: KernelContext) -> complex:
    return product_K(lam_n, gam_m, ctx.dual_context)


def product_hat_mu(lam_n, ctx: KernelContext) -> complex:
    return product_mu(lam_n, ctx.dual_context)


def norm_d(n: int, ctx: KernelContext) -> complex:
    """Normalization constant [sqrt(omega1 omega2) S2(g)]^(-n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1.0 + 0.0j
    p = ctx.params
    base = np.sqrt(p.omega1 * p.omega2) * s2(p.g, p)
    return complex(base ** (-n))
