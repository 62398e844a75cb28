"""Shared integration engine.

Deterministic adaptive quadrature on the real line for integrands with
exponentially decaying envelopes, tensorized rules for 2-3 dimensions, and
stratified Monte Carlo for higher dimensions.  Integrands are vectorized:
a 1D integrand maps an ndarray of nodes to an ndarray of complex values; a
tensor integrand maps a tuple of per-axis node arrays to the full tensor of
values; a Monte Carlo integrand maps an (m, dims) array of points to m values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionTooLarge, NonPositiveDecay, QuadratureFailure)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

_SCHEMES = ("adaptive-gauss", "tanh-sinh", "monte-carlo")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "adaptive-gauss"
    tolerance: float = 1e-9
    max_nodes: int = 400_000
    truncation_radius: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_nodes < 15:
            raise ValueError("max_nodes must be at least 15")
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive when given")

    def with_(self, **kw) -> "QuadratureSpec":
        d = dict(scheme=self.scheme, tolerance=self.tolerance,
                 max_nodes=self.max_nodes,
                 truncation_radius=self.truncation_radius, seed=self.seed)
        d.update(kw)
        return QuadratureSpec(**d)

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "tolerance": self.tolerance,
                "max_nodes": self.max_nodes,
                "truncation_radius": self.truncation_radius, "seed": self.seed}

    @staticmethod
    def from_json(obj: dict) -> "QuadratureSpec":
        return QuadratureSpec(
            scheme=obj.get("scheme", "adaptive-gauss"),
            tolerance=float(obj.get("tolerance", 1e-9)),
            max_nodes=int(obj.get("max_nodes", 400_000)),
            truncation_radius=obj.get("truncation_radius"),
            seed=int(obj.get("seed", 0)))


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    nodes_used: int
    truncation_radius_used: float


def truncation_radius(decay_rate: float, amplitude: float, tol: float) -> float:
    """Radius R with amplitude * exp(-decay_rate*R) / decay_rate <= tol/10."""
    if not decay_rate > 0:
        raise NonPositiveDecay(f"decay rate {decay_rate} must be positive")
    amplitude = max(abs(amplitude), 1e-300)
    r = math.log(10.0 * amplitude / (tol * decay_rate)) / decay_rate
    return max(r, 0.5)


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _panel_edges(lo: float, hi: float, n_panels: int,
                 features: tuple = ()) -> np.ndarray:
    """Uniform panel edges refined geometrically around sharp features.

    Each feature is a (center, scale) pair; edges are inserted at
    center +- scale * 2^k so that narrow peaks are resolved without a
    global node explosion.
    """
    edges = set(np.linspace(lo, hi, n_panels + 1))
    base = (hi - lo) / n_panels
    for (c, s) in features:
        if not (lo < c < hi) or s <= 0 or s >= base:
            continue
        edges.add(c)
        d = s
        while d < 2 * base:
            if lo < c - d < hi:
                edges.add(c - d)
            if lo < c + d < hi:
                edges.add(c + d)
            d *= 2.0
    return np.array(sorted(edges))


def _gl_pass(f, edges: np.ndarray) -> tuple[complex, int]:
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=complex)
    return _fsum_complex(vals * wts), nodes.size


def _split_edges(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[1:] + edges[:-1])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def _initial_panels(width: float, osc: float) -> int:
    # ~8 nodes per oscillation period; 16-point panels
    n_per = 8.0 * abs(osc) * width
    return max(8, int(math.ceil(n_per / 16.0)))


def integrate_1d(f, spec: QuadratureSpec, *, decay_rate: float,
                 amplitude: float = 1.0, osc: float = 0.0,
                 center: float = 0.0, features: tuple = (),
                 grow_radius: bool = False) -> IntegralResult:
    """Integrate f over the real line, truncated by the declared envelope.

    f must accept an ndarray of nodes and return complex values.  `osc` is
    the dominant oscillation frequency (cycles per unit length), used to set
    the initial node density; `features` marks (center, scale) peaks needing
    graded panels.
    """
    if spec.scheme == "monte-carlo":
        return _mc_1d(f, spec, decay_rate=decay_rate, amplitude=amplitude,
                      center=center)
    radius = spec.truncation_radius or truncation_radius(
        decay_rate, amplitude, spec.tolerance)
    for _ in range(5):
        res = _integrate_interval(f, spec, center - radius, center + radius,
                                  osc=osc, features=features)
        if not grow_radius:
            return res
        wider = _integrate_interval(f, spec, center - 1.4 * radius,
                                    center + 1.4 * radius, osc=osc,
                                    features=features)
        tail_change = abs(wider.value - res.value)
        if tail_change <= max(spec.tolerance, 2 * res.error_estimate):
            return IntegralResult(wider.value,
                                  max(wider.error_estimate, tail_change),
                                  res.nodes_used + wider.nodes_used,
                                  1.4 * radius)
        radius *= 2.0
    raise QuadratureFailure("truncation radius failed to stabilize")


def _integrate_interval(f, spec: QuadratureSpec, lo: float, hi: float, *,
                        osc: float = 0.0, features: tuple = ()) -> IntegralResult:
    if spec.scheme == "tanh-sinh":
        return _tanh_sinh(f, spec, lo, hi)
    edges = _panel_edges(lo, hi, _initial_panels(hi - lo, osc), features)
    total, used = _gl_pass(f, edges)
    while True:
        edges = _split_edges(edges)
        refined, n = _gl_pass(f, edges)
        used += n
        diff = abs(refined - total)
        total = refined
        floor = 4e-16 * (abs(total) + 1e-300)
        if diff <= max(spec.tolerance, floor):
            return IntegralResult(total, max(diff, floor), used, 0.5 * (hi - lo))
        if used + 2 * n > spec.max_nodes:
            raise QuadratureFailure(
                f"estimate {diff:.2e} above tolerance {spec.tolerance:.2e} "
                f"at node budget {spec.max_nodes}")


def _tanh_sinh(f, spec: QuadratureSpec, lo: float, hi: float) -> IntegralResult:
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    h, level_max = 0.25, 9
    tmax = 3.2  # tanh(pi/2*sinh(3.2)) == 1 to double precision
    total, used, prev = 0j, 0, None
    for level in range(level_max):
        step = h / 2**level
        k = np.arange(-int(tmax / step), int(tmax / step) + 1)
        t = k * step
        if level > 0:
            t = t[k % 2 != 0]  # new nodes only
        u = 0.5 * np.pi * np.sinh(t)
        x = np.tanh(u)
        w = 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
        inside = np.abs(x) < 1.0
        vals = np.asarray(f(mid + half * x[inside]), dtype=complex)
        part = _fsum_complex(vals * w[inside]) * half
        total = 0.5 * total + 0.5 * part if level > 0 else part
        used += int(inside.sum())
        if prev is not None:
            diff = abs(total - prev)
            floor = 4e-16 * (abs(total) + 1e-300)
            if diff <= max(spec.tolerance, floor):
                return IntegralResult(total * 2 ** 0, max(diff, floor), used, half)
        prev = total
        if used > spec.max_nodes:
            break
    raise QuadratureFailure("tanh-sinh failed to reach tolerance")


def _mc_1d(f, spec, *, decay_rate, amplitude, center) -> IntegralResult:
    radius = spec.truncation_radius or truncation_radius(
        decay_rate, amplitude, spec.tolerance)
    n = spec.max_nodes
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    # stratified: one uniform draw per equal-width cell
    u = (np.arange(n) + rng.random(n)) / n
    x = center - radius + 2 * radius * u
    vals = np.asarray(f(x), dtype=complex)
    width = 2 * radius
    value = _fsum_complex(vals) * width / n
    err = float(np.std(vals) * width / math.sqrt(n))
    return IntegralResult(value, err, n, radius)


def integrate_nd(f, dims: int, spec: QuadratureSpec, *, decay_rates,
                 amplitudes=None, oscs=None, centers=None,
                 features=None, radii=None) -> IntegralResult:
    """Integrate over R^dims.

    Tensorized adaptive Gauss for dims <= 3 (f receives the tuple of per-axis
    node arrays and returns the value tensor); stratified Monte Carlo with a
    1/sqrt(N) error estimate for dims >= 4 or when the spec says so (f then
    receives an (m, dims) array of points).
    """
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if dims > 8:
        raise DimensionTooLarge(f"dims = {dims} beyond supported range")
    decay_rates = np.broadcast_to(np.asarray(decay_rates, dtype=float), (dims,))
    amplitudes = np.broadcast_to(
        np.asarray(1.0 if amplitudes is None else amplitudes, dtype=float), (dims,))
    oscs = np.broadcast_to(
        np.asarray(0.0 if oscs is None else oscs, dtype=float), (dims,))
    centers = np.broadcast_to(
        np.asarray(0.0 if centers is None else centers, dtype=float), (dims,))
    if radii is None:
        radii = [spec.truncation_radius or truncation_radius(
            decay_rates[a], amplitudes[a], spec.tolerance) for a in range(dims)]
    features = features or [()] * dims

    if dims >= 4 or spec.scheme == "monte-carlo":
        return _mc_nd(f, dims, spec, centers, radii)

    edge_list = [
        _panel_edges(centers[a] - radii[a], centers[a] + radii[a],
                     _initial_panels(2 * radii[a], oscs[a]), features[a])
        for a in range(dims)]
    total, used = _tensor_pass(f, edge_list)
    while True:
        edge_list = [_split_edges(e) for e in edge_list]
        refined, n = _tensor_pass(f, edge_list)
        used += n
        diff = abs(refined - total)
        total = refined
        floor = 4e-16 * (abs(total) + 1e-300)
        if diff <= max(spec.tolerance, floor):
            return IntegralResult(total, max(diff, floor), used, max(radii))
        if used + 2 ** dims * n > spec.max_nodes:
            raise QuadratureFailure(
                f"estimate {diff:.2e} above tolerance {spec.tolerance:.2e} "
                f"at node budget {spec.max_nodes}")


def _tensor_pass(f, edge_list) -> tuple[complex, int]:
    axes, wts = [], []
    for edges in edge_list:
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        axes.append((mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel())
        wts.append((half[:, None] * _GL_WEIGHTS[None, :]).ravel())
    vals = np.asarray(f(tuple(axes)), dtype=complex)
    expected = tuple(len(a) for a in axes)
    if vals.shape != expected:
        raise ValueError(f"tensor integrand returned {vals.shape}, "
                         f"expected {expected}")
    for a in range(len(axes)):
        shape = [1] * vals.ndim
        shape[a] = len(wts[a])
        vals = vals * wts[a].reshape(shape)
    flat = vals.ravel()
    return _fsum_complex(flat), int(np.prod(expected))


def _mc_nd(f, dims, spec, centers, radii) -> IntegralResult:
    n = spec.max_nodes
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    k = max(1, int(n ** (1.0 / dims)))
    # stratified lattice: one draw per cell of a k^dims grid, then the
    # remainder purely at random
    grid = np.stack(np.meshgrid(*[np.arange(k)] * dims, indexing="ij"),
                    axis=-1).reshape(-1, dims)
    pts = (grid + rng.random(grid.shape)) / k
    extra = n - len(pts)
    if extra > 0:
        pts = np.vstack([pts, rng.random((extra, dims))])
    lo = centers - np.asarray(radii)
    widths = 2 * np.asarray(radii)
    x = lo[None, :] + widths[None, :] * pts
    vals = np.asarray(f(x), dtype=complex)
    volume = float(np.prod(widths))
    m = len(vals)
    value = _fsum_complex(vals) * volume / m
    err = float(np.std(vals) * volume / math.sqrt(m))
    return IntegralResult(value, err, m, float(max(radii)))
