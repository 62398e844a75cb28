"""Parameter triple (omega1, omega2, g) and its derived constants.

All higher modules consume a validated :class:`Params`.  The standing
assumptions are strict inequalities: boundary triples are rejected because
every convergence argument downstream needs positive margins.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams

_REL_TOL = 1e-14


class ResonanceWarning(UserWarning):
    """Period ratio is (close to) rational with a small denominator."""


@dataclass(frozen=True)
class Params:
    """Validated parameter triple with derived quantities.

    Use :func:`validate` to construct; the raw constructor performs no checks.
    """

    omega1: complex
    omega2: complex
    g: complex

    @property
    def gstar(self) -> complex:
        return self.omega1 + self.omega2 - self.g

    @property
    def ghat(self) -> complex:
        return self.g / (self.omega1 * self.omega2)

    @property
    def ghatstar(self) -> complex:
        return self.gstar / (self.omega1 * self.omega2)

    @property
    def nu_g(self) -> float:
        return self.ghat.real

    @property
    def nu_gstar(self) -> float:
        return self.ghatstar.real

    @property
    def hat_periods(self) -> tuple[complex, complex]:
        return (1 / self.omega2, 1 / self.omega1)

    @property
    def is_real(self) -> bool:
        return (self.omega1.imag == 0.0 and self.omega2.imag == 0.0
                and self.g.imag == 0.0)

    def isclose(self, other: "Params", rel_tol: float = _REL_TOL) -> bool:
        def close(a: complex, b: complex) -> bool:
            return abs(a - b) <= rel_tol * max(abs(a), abs(b), 1.0)

        return (close(self.omega1, other.omega1)
                and close(self.omega2, other.omega2)
                and close(self.g, other.g))

    def to_json(self) -> dict:
        return {
            "omega1": [self.omega1.real, self.omega1.imag],
            "omega2": [self.omega2.real, self.omega2.imag],
            "g": [self.g.real, self.g.imag],
        }

    @staticmethod
    def from_json(obj: dict) -> "Params":
        def cplx(v) -> complex:
            if isinstance(v, (int, float)):
                return complex(v, 0.0)
            re, im = v
            return complex(re, im)

        return validate(cplx(obj["omega1"]), cplx(obj["omega2"]), cplx(obj["g"]))


def near_resonance(omega1: complex, omega2: complex,
                   qmax: int = 8, tol: float = 1e-6):
    """Return (p, q) if omega1/omega2 is within tol of p/q with q <= qmax."""
    r = omega1 / omega2
    if abs(r.imag) > tol * abs(r):
        return None
    frac = Fraction(r.real).limit_denominator(qmax)
    if frac.denominator <= qmax and abs(r.real - float(frac)) < tol:
        return (frac.numerator, frac.denominator)
    return None


def validate(omega1: complex, omega2: complex, g: complex) -> Params:
    """Check the standing assumptions and build a :class:`Params`.

    Raises :class:`InvalidParams` naming the violated inequality.
    """
    omega1, omega2, g = complex(omega1), complex(omega2), complex(g)
    if not omega1.real > 0:
        raise InvalidParams("Re omega1 > 0 violated")
    if not omega2.real > 0:
        raise InvalidParams("Re omega2 > 0 violated")
    if not g.real > 0:
        raise InvalidParams("0 < Re g violated")
    if not g.real < omega1.real + omega2.real:
        raise InvalidParams("Re g < Re omega1 + Re omega2 violated")
    p = Params(omega1, omega2, g)
    if not p.nu_g > 0:
        raise InvalidParams("nu_g > 0 violated")
    if not p.nu_gstar > 0:
        raise InvalidParams("nu_gstar > 0 violated")
    res = near_resonance(omega1, omega2)
    if res is not None:
        warnings.warn(
            f"period ratio is near {res[0]}/{res[1]}: poles of the double sine "
            "collide and residue formulas at higher lattice points degenerate",
            ResonanceWarning, stacklevel=2)
    return p


def dualize(p: Params) -> Params:
    """Map (omega1, omega2, g) to the dual triple (1/omega2, 1/omega1, g*/(omega1 omega2)).

    An involution: dualize(dualize(p)) == p up to rounding.
    """
    w1, w2 = p.hat_periods
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        return validate(w1, w2, p.ghatstar)
