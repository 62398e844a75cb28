"""Named verification suites with pinned tolerances.

Each suite maps a run configuration to a list of reports; `run_suite`
dispatches by name.  Tolerances are fixed here, not configurable: they are
the acceptance contract of the library.  The `smoke` profile shrinks sample
counts and loosens nothing.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import inequalities as ineq
from .double_sine import PoleZeroIndex, s2, s2_residue
from .errors import ConfigError, UnknownSuite
from .integrals import (CATALOG, RegularizationSchedule, TestFunction,
                        closed_form_I, closed_form_J, delta_sequence_test,
                        closed_regularized_pairing, regularized_pairing,
                        integral_I, integral_J, inversion_check,
                        plancherel_check, plancherel_check_2d,
                        recurrence_residual_I, recurrence_residual_J)
from .kernels import (KernelContext, hat_K, kernel_K, measure_mu, norm_d,
                      product_mu)
from .operators import (baxterQ_apply, gauge_conjugation_check,
                        macdonald_eigen_check)
from .params import Params, validate
from .quadrature import QuadratureSpec, integrate_1d
from .report import VerificationReport
from .wavefunction import SpectralVector, psi, psi2_on_grid, psi_dual

PRESETS = {
    "REAL-SYMM": (1.0, 1.0, 0.5),
    "REAL-ASYMM": (0.3, 1.0, 0.4),
    "COMPLEX": (1 + 0.2j, 1.0, 0.5 + 0.1j),
}


def preset(name: str) -> Params:
    try:
        w1, w2, g = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown parameter preset {name!r}") from None
    import warnings
    from .params import ResonanceWarning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        return validate(w1, w2, g)


@dataclass
class RunConfig:
    params: Params = field(default_factory=lambda: preset("REAL-SYMM"))
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    suites: tuple = ("all",)
    seed: int = 0
    profile: str = "full"   # "full" | "smoke"

    @staticmethod
    def from_json(obj: dict) -> "RunConfig":
        try:
            p = obj.get("params", "REAL-SYMM")
            params = preset(p) if isinstance(p, str) else Params.from_json(p)
            quad = QuadratureSpec.from_json(obj.get("quadrature", {}))
            suites = tuple(obj.get("suites", ("all",)))
            seed = int(obj.get("seed", 0))
            profile = obj.get("profile", "full")
            if profile not in ("full", "smoke"):
                raise ConfigError(f"unknown profile {profile!r}")
            return RunConfig(params, quad, suites, seed, profile)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc

    @property
    def smoke(self) -> bool:
        return self.profile == "smoke"


def _timed(check: str, n: int, tol: float, fn, **meta) -> VerificationReport:
    t0 = time.perf_counter()
    residual = float(fn())
    return VerificationReport(
        check=check, n=n, residual=residual, tolerance=tol,
        passed=residual <= tol,
        runtime_ms=1e3 * (time.perf_counter() - t0), metadata=meta)


def _sample_avoiding(rng, count, p: Params):
    """Random points in the annulus 0.1 < |z| < 3 away from poles/zeros."""
    pts = []
    lattice = [m * p.omega1 + k * p.omega2
               for m in range(-6, 7) for k in range(-6, 7)]
    lattice = np.array(lattice)
    while len(pts) < count:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if not 0.1 < abs(z) < 3.0:
            continue
        if np.min(np.abs(lattice - z)) < 0.05:
            continue
        pts.append(z)
    return np.array(pts)


# ---------------------------------------------------------------------------


def suite_s2_identities(cfg: RunConfig) -> list:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    count = 20 if cfg.smoke else 100
    z = _sample_avoiding(rng, count, p)
    out = []
    sigma = p.omega1 + p.omega2

    out.append(_timed("s2-inversion", 0, 1e-9, lambda: np.max(
        np.abs(s2(z, p) * s2(sigma - z, p) - 1.0)), points=count))

    def fe(omega, other):
        lhs = s2(z, p) / s2(z + omega, p)
        rhs = 2 * np.sin(np.pi * z / other)
        return np.max(np.abs(lhs - rhs) / np.abs(rhs))

    out.append(_timed("s2-shift-omega1", 0, 1e-9,
                      lambda: fe(p.omega1, p.omega2), points=count))
    out.append(_timed("s2-shift-omega2", 0, 1e-9,
                      lambda: fe(p.omega2, p.omega1), points=count))

    base = s2(z, p)
    scale = np.maximum(np.abs(base), 1.0)  # near-pole magnitudes otherwise
    #                                        amplify pure rounding noise

    def hom():
        worst = 0.0
        for gam in (0.5, 2.0, 3.7):
            import warnings
            from .params import ResonanceWarning
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ResonanceWarning)
                ps = validate(gam * p.omega1, gam * p.omega2, gam * p.g)
            worst = max(worst, float(np.max(
                np.abs(s2(gam * z, ps) - base) / scale)))
        return worst

    out.append(_timed("s2-homogeneity", 0, 1e-9, hom, points=count))

    def swap():
        import warnings
        from .params import ResonanceWarning
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResonanceWarning)
            psw = validate(p.omega2, p.omega1, p.g)
        return np.max(np.abs(base - s2(z, psw)) / scale)

    out.append(_timed("s2-period-swap", 0, 1e-9, swap, points=count))

    if p.is_real:
        out.append(_timed("s2-conjugation", 0, 1e-10, lambda: np.max(
            np.abs(s2(np.conj(z), p) - np.conj(base)) / scale), points=count))

    def residue_origin():
        target = s2_residue(PoleZeroIndex(0, 0, "zero"), p)
        h = 1e-3 * abs(p.omega1 + p.omega2)
        ests = np.array([h / s2(h, p), (h / 2) / s2(h / 2, p),
                         (h / 4) / s2(h / 4, p)])
        # two Richardson steps kill the linear and quadratic corrections
        r1 = 2 * ests[1:] - ests[:-1]
        limit = (4 * r1[1] - r1[0]) / 3
        return abs(limit - target) / abs(target)

    out.append(_timed("s2-residue-origin", 0, 1e-8, residue_origin))
    return out


def suite_kernel_bounds(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    nu = ctx.params.nu_g
    out = []

    def rate_of(fn, lo, hi):
        x = np.linspace(lo, hi, 200)
        vals = np.abs(fn(x))
        return np.polyfit(x, np.log(vals), 1)[0]

    out.append(_timed("K-decay-rate", 1, 0.01, lambda: abs(
        rate_of(lambda x: kernel_K(x, ctx), 10, 30) + np.pi * nu) / (np.pi * nu)))
    out.append(_timed("mu-growth-rate", 1, 0.01, lambda: abs(
        rate_of(lambda x: measure_mu(x, ctx), 10, 30) - np.pi * nu) / (np.pi * nu)))

    def bounded(fn, sign):
        x = np.linspace(-30, 30, 601)
        envelope = np.abs(fn(x)) * np.exp(sign * np.pi * nu * np.abs(x))
        c = float(np.max(envelope))
        return 0.0 if np.isfinite(c) and c < 1e6 else 1.0

    out.append(_timed("K-bound-constant", 1, 0.5,
                      lambda: bounded(lambda x: kernel_K(x, ctx), +1)))
    out.append(_timed("mu-bound-constant", 1, 0.5,
                      lambda: bounded(lambda x: measure_mu(x, ctx), -1)))

    def mu_nonneg():
        rng = np.random.default_rng(cfg.seed + 1)
        samples = 1000 if cfg.smoke else 10_000
        worst = 0.0
        for _ in range(samples):
            n = rng.integers(2, 5)
            xs = rng.uniform(-8, 8, n)
            while np.min(np.abs(np.subtract.outer(xs, xs)
                                + np.eye(n))) < 1e-6:
                xs = rng.uniform(-8, 8, n)
            v = product_mu(xs, ctx)
            worst = max(worst, abs(v.imag), -min(v.real, 0.0))
        return worst

    out.append(_timed("product-mu-nonnegative", 4, 1e-12, mu_nonneg))
    return out


def suite_fourier(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    nu = ctx.params.nu_g
    lams = (0.0, 0.3, 1.0, 0.3 + 0.1j * nu)
    spec = QuadratureSpec(tolerance=1e-12, seed=cfg.seed)

    def worst():
        w = 0.0
        for lam in lams:
            rate = np.pi * nu - 2 * np.pi * abs(complex(lam).imag)
            res = integrate_1d(
                lambda y: kernel_K(y, ctx) * np.exp(2j * np.pi * lam * y),
                spec, decay_rate=rate, amplitude=5 * abs(kernel_K(0.0, ctx)),
                osc=abs(complex(lam).real))
            rhs = (np.sqrt(ctx.params.omega1 * ctx.params.omega2)
                   * s2(ctx.params.g, ctx.params) * hat_K(lam, ctx))
            w = max(w, abs(res.value - rhs) / abs(rhs))
        return w

    return [_timed("fourier-transform-K", 1, 1e-8, worst,
                   lambdas=[[complex(l).real, complex(l).imag] for l in lams])]


def _admissible_tuples(rng, n_gamma, n_lambda, nu, count):
    for _ in range(count):
        g = SpectralVector(tuple(rng.uniform(-0.6, 0.6, n_gamma)), 0.0)
        l = SpectralVector(tuple(rng.uniform(-0.6, 0.6, n_lambda)), 0.2 * nu)
        x = float(rng.uniform(-0.5, 0.5))
        yield g, l, x


def suite_basic_integrals(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    nu = ctx.params.nu_g
    rng = np.random.default_rng(cfg.seed + 2)
    count = 1 if cfg.smoke else 5
    out = []

    def worst_J1():
        w = 0.0
        for g, l, x in _admissible_tuples(rng, 1, 1, nu, count):
            jn = integral_J(g, l, x, ctx)
            jc = closed_form_J(g, l, x, ctx)
            w = max(w, abs(jn - jc) / abs(jc))
        return w

    out.append(_timed("J-closed-form", 1, 1e-8, worst_J1, tuples=count))

    def worst_I1():
        w = 0.0
        for g, l, x in _admissible_tuples(rng, 1, 2, nu, count):
            inum = integral_I(g, l, x, ctx)
            icl = closed_form_I(g, l, x, ctx)
            w = max(w, abs(inum - icl) / abs(icl))
        return w

    out.append(_timed("I-closed-form", 1, 1e-8, worst_I1, tuples=count))

    if not cfg.smoke:
        spec2 = QuadratureSpec(tolerance=2e-8, max_nodes=4_000_000)

        def worst_J2():
            w = 0.0
            for g, l, x in _admissible_tuples(rng, 2, 2, nu, count):
                jn = integral_J(g, l, x, ctx, spec2)
                jc = closed_form_J(g, l, x, ctx)
                w = max(w, abs(jn - jc) / abs(jc))
            return w

        out.append(_timed("J-closed-form", 2, 1e-5, worst_J2, tuples=count))

        spec_i2 = QuadratureSpec(tolerance=3e-7, max_nodes=4_000_000)

        def worst_I2():
            w = 0.0
            for g, l, x in _admissible_tuples(rng, 2, 3, nu, count):
                inum = integral_I(g, l, x, ctx, spec_i2)
                icl = closed_form_I(g, l, x, ctx)
                w = max(w, abs(inum - icl) / abs(icl))
            return w

        out.append(_timed("I-closed-form", 2, 1e-5, worst_I2, tuples=count))

    g, l, x = next(_admissible_tuples(rng, 1, 2, nu, 1))
    out.append(_timed("recurrence-IJ1", 1, 1e-5,
                      lambda: recurrence_residual_I(g, l, x, ctx)))
    g1, l1, x1 = next(_admissible_tuples(rng, 1, 1, nu, 1))
    out.append(_timed("recurrence-IJ2", 1, 1e-5,
                      lambda: recurrence_residual_J(g1, l1, x1, ctx)))
    if not cfg.smoke:
        g2, l2, x2 = next(_admissible_tuples(rng, 2, 3, nu, 1))
        out.append(_timed(
            "recurrence-IJ1", 2, 1e-5,
            lambda: recurrence_residual_I(
                g2, l2, x2, ctx, QuadratureSpec(tolerance=3e-7,
                                                max_nodes=4_000_000))))
        g3, l3, x3 = next(_admissible_tuples(rng, 2, 2, nu, 1))
        out.append(_timed(
            "recurrence-IJ2", 2, 1e-5,
            lambda: recurrence_residual_J(
                g3, l3, x3, ctx, QuadratureSpec(tolerance=2e-8,
                                                max_nodes=4_000_000))))
    return out


def suite_eigen_macdonald(cfg: RunConfig) -> list:
    out = []
    ctx1 = KernelContext(cfg.params)
    r1 = macdonald_eigen_check([0.2], [0.4], 0.7 + 0j, ctx1)
    out.append(r1.finalized(1e-12))

    ctx = KernelContext(preset("REAL-ASYMM"))
    spec = QuadratureSpec(tolerance=1e-9)
    r2 = macdonald_eigen_check([0.2, -0.1], [0.4, 0.0], 0.7 + 0j, ctx, spec)
    out.append(r2.finalized(1e-5))
    rd = macdonald_eigen_check([0.2, -0.1], [0.4, 0.0], 0.7 + 0j, ctx, spec,
                               dual=True)
    out.append(rd.finalized(1e-5))

    ctxs = KernelContext(preset("REAL-SYMM"))
    for r in (1, 2):
        out.append(gauge_conjugation_check(r, [0.7, 0.1], ctxs).finalized(1e-8))
    return out


def suite_eigen_baxter(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params if cfg.params.is_real else preset("REAL-SYMM"))
    out = []
    lam_p = 0.45

    def n1():
        lam1, xx = 0.3, 0.55
        got = baxterQ_apply(
            lam_p, lambda axes: np.exp(2j * np.pi * lam1 * axes[0]), [xx],
            ctx, QuadratureSpec(tolerance=1e-11))
        want = hat_K(lam_p - lam1, ctx) * np.exp(2j * np.pi * lam1 * xx)
        return abs(got - want) / abs(want)

    out.append(_timed("eigen-baxter", 1, 1e-8, n1))

    lam2 = np.array([0.3, -0.2])
    x2 = [0.55, -0.1]
    tol = 1e-5 if cfg.smoke else 1e-6

    def n2():
        got = baxterQ_apply(
            lam_p, lambda axes: psi2_on_grid(lam2, axes[0], axes[1], ctx, tol / 5),
            x2, ctx, QuadratureSpec(tolerance=tol, max_nodes=6_000_000))
        want = (hat_K(lam_p - lam2[0], ctx) * hat_K(lam_p - lam2[1], ctx)
                * psi(lam2, x2, ctx))
        return abs(got - want) / abs(want)

    out.append(_timed("eigen-baxter", 2, 1e-4, n2))

    def commute():
        # Q(l) Q(r) f vs Q(r) Q(l) f on a gaussian at one point, n = 1
        worst = 0.0
        for (la, rb) in ((0.35, -0.2), (0.1, 0.6)):
            def f(axes):
                return np.exp(-0.5 * axes[0] ** 2)
            def qf(mu_p):
                def inner(axes):
                    u = axes[0]
                    vals = np.array([
                        baxterQ_apply(mu_p, f, [ui], ctx,
                                      QuadratureSpec(tolerance=1e-9))
                        for ui in u])
                    return vals
                return inner
            ab = baxterQ_apply(la, qf(rb), [0.3], ctx,
                               QuadratureSpec(tolerance=1e-8))
            ba = baxterQ_apply(rb, qf(la), [0.3], ctx,
                               QuadratureSpec(tolerance=1e-8))
            worst = max(worst, abs(ab - ba) / max(abs(ab), abs(ba)))
        return worst

    if not cfg.smoke:
        out.append(_timed("baxter-commutativity", 1, 1e-7, commute))
    return out


def suite_duality(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    rng = np.random.default_rng(cfg.seed + 3)
    count = 2 if cfg.smoke else 10
    spec = QuadratureSpec(tolerance=1e-9)

    def worst():
        w = 0.0
        for _ in range(count):
            lam = rng.uniform(-0.5, 0.5, 2)
            x = rng.uniform(-0.8, 0.8, 2)
            a = psi(lam, x, ctx, spec)
            b = psi_dual(lam, x, ctx, spec)
            w = max(w, abs(a - b) / abs(a))
        return w

    return [_timed("duality", 2, 1e-4, worst, points=count)]


def suite_delta_sequence(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    out = []
    schedule = RegularizationSchedule()
    phi = TestFunction("gaussian", 0.0, 0.8)
    lam = 0.15

    rep = delta_sequence_test(phi, [lam], schedule, ctx)
    dev = abs(complex(rep.metadata["extrapolated"]) - rep.metadata["target"])
    rep.residual = float(dev)
    rep.check = "delta-extrapolated"
    out.append(rep.finalized(1e-3))
    if not rep.metadata["monotone_decrease"]:
        out[-1].passed = False

    far = TestFunction("gaussian", lam + 8.0, 0.5)
    rep2 = delta_sequence_test(far, [lam], schedule, ctx)
    rep2.residual = abs(complex(rep2.metadata["extrapolated"]))
    rep2.check = "delta-off-support"
    out.append(rep2.finalized(1e-6))

    # pairing sanity at moderate eps: numeric vs closed form, monotonicity
    def pairing_residual():
        lp = np.array([0.2])
        ll = np.array([0.05])
        pn = regularized_pairing(lp, ll, 5.0, 0.05, ctx)
        pc = closed_regularized_pairing(lp, ll, 5.0, 0.05, ctx)
        return abs(pn - pc) / abs(pc)

    out.append(_timed("pairing-closed-form", 1, 1e-8, pairing_residual))

    def eps_monotone():
        ll = np.array([0.05])
        vals = [abs(closed_regularized_pairing(ll, ll, 10.0, e, ctx))
                for e in (1e-2, 1e-3, 1e-4)]
        return 0.0 if vals[0] < vals[1] < vals[2] else 1.0

    out.append(_timed("pairing-eps-monotone", 1, 0.5, eps_monotone))

    if not cfg.smoke:
        mc = QuadratureSpec(scheme="monte-carlo", tolerance=5e-2,
                            max_nodes=6_000_000, seed=cfg.seed)
        rep3 = delta_sequence_test(phi, [0.15, -0.3], schedule, ctx, mc)
        out.append(rep3.finalized(5e-2))
    return out


def suite_plancherel(cfg: RunConfig) -> list:
    ctx = KernelContext(cfg.params)
    out = []
    funcs = CATALOG[:1] if cfg.smoke else CATALOG
    for phi in funcs:
        out.append(plancherel_check(phi, ctx).finalized(1e-6))
    phi = CATALOG[0]
    pts = np.linspace(-1.2, 1.2, 10)
    out.append(inversion_check(phi, pts, ctx).finalized(1e-6))
    c1 = out[0].metadata["c1_measured"]
    out.append(VerificationReport(
        check="c1-measured", n=1, residual=abs(c1 - 1.0), tolerance=1e-6,
        passed=abs(c1 - 1.0) <= 1e-6, runtime_ms=0.0,
        metadata={"c1": c1}))
    if not cfg.smoke:
        out.append(plancherel_check_2d(
            CATALOG[0], ctx,
            QuadratureSpec(scheme="monte-carlo", tolerance=5e-2,
                           max_nodes=400, seed=cfg.seed)).finalized(5e-2))
    return out


def suite_inequalities(cfg: RunConfig) -> list:
    out = []
    samples = 20_000 if cfg.smoke else 100_000
    seed = cfg.seed
    for n in (2, 3, 4):
        for hw in (10.0, 1e4):
            out.append(ineq.check_S_bound(n, 0.5, samples, seed, hw)
                       .finalized(1e-12))
            out.append(ineq.check_S_bound(n, 0.0, samples, seed + 1, hw)
                       .finalized(1e-12))
            out.append(ineq.check_L_nonpositive(n, samples, seed + 2, hw)
                       .finalized(1e-12))
            for eps in (0.0, 0.5, 1.0):
                out.append(ineq.check_R_bound(n, eps, samples, seed + 3, hw)
                           .finalized(1e-12))
    return out


REGISTRY = {
    "s2-identities": suite_s2_identities,
    "kernel-bounds": suite_kernel_bounds,
    "fourier": suite_fourier,
    "basic-integrals": suite_basic_integrals,
    "eigen-macdonald": suite_eigen_macdonald,
    "eigen-baxter": suite_eigen_baxter,
    "duality": suite_duality,
    "delta-sequence": suite_delta_sequence,
    "plancherel": suite_plancherel,
    "inequalities": suite_inequalities,
}

SUITE_NAMES = tuple(REGISTRY) + ("all",)


def run_suite(name: str, cfg: RunConfig) -> list:
    """Execute one named suite (or all of them) and return the reports."""
    if name == "all":
        reports = []
        for key in REGISTRY:
            reports.extend(REGISTRY[key](cfg))
        return reports
    try:
        fn = REGISTRY[name]
    except KeyError:
        raise UnknownSuite(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}") \
            from None
    return fn(cfg)
