"""
    Exact maximal overlaps for the families solvable by hand: GHZ and GHZ'
    families, W states, the catalog of basic TI states, and the general
    three-qubit single-excitation state
        |W'> = c0|100> + c1 e^{i alpha}|010> + c2 e^{i beta}|001>.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from geoent.states.qstate import SeedPattern, InvalidStateError
from .overlap import ProductParams


__all__ = [
    "UNKNOWN",
    "Maximizer",
    "Candidate",
    "ClosedFormResult",
    "lambda_ghz_family",
    "lambda_ghz_prime_family",
    "lambda_w",
    "lambda_known_basic",
    "w_prime_solver",
    "KNOWN_BASIC",
]

logger = logging.getLogger(__name__)

UNKNOWN = "unknown"


def _exact(x: Union[float, Fraction]) -> Optional[Fraction]:
    """ Small-denominator rational equal to x to double precision, else None """
    if isinstance(x, Fraction):
        return x
    f = Fraction(float(x)).limit_denominator(1_000_000)
    return f if abs(float(f) - float(x)) < 1e-15 else None


@dataclass(frozen=True)
class Maximizer:
    """
    One point of the argmax set; free_phase describes the phase directions
    along which the point can move without changing the overlap.
    """
    params: ProductParams
    free_phase: Optional[str] = None

    def to_dict(self) -> Dict:
        return {"params": self.params.to_dict(), "free_phase": self.free_phase}


@dataclass(frozen=True)
class Candidate:
    kind: str     # "boundary" | "interior"
    value: float
    exact: Optional[Fraction]
    params: ProductParams

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "exact": None if self.exact is None else f"{self.exact.numerator}/{self.exact.denominator}",
            "params": self.params.to_dict(),
        }


@dataclass(frozen=True)
class ClosedFormResult:
    family: str
    lambda_max: float
    maximizers: Tuple[Maximizer, ...]
    lambda_exact: Optional[Fraction] = None
    candidates: Tuple[Candidate, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "lambda": self.lambda_max,
            "lambda_exact": None if self.lambda_exact is None else f"{self.lambda_exact.numerator}/{self.lambda_exact.denominator}",
            "maximizers": [ m.to_dict() for m in self.maximizers ],
            "candidates": [ c.to_dict() for c in self.candidates ],
        }


def _check_c(c) -> None:
    if not 0 <= float(c) <= 1:
        raise InvalidStateError(f"Coefficient c must lie in [0, 1], got {c!r}")


def lambda_ghz_family(n: int, c: Union[float, Fraction], phi: float=0.0) -> ClosedFormResult:
    """
    sqrt(c)|1..1> + e^{i phi} sqrt(1-c)|0..0>: Lambda = max(c, 1 - c).
    """
    _check_c(c)
    maximizers = []
    if c >= 1 - c:
        maximizers.append(Maximizer(ProductParams.uniform(n, 1.0, 0.0), "any theta"))
    if 1 - c >= c:
        maximizers.append(Maximizer(ProductParams.uniform(n, 0.0, phi / n), "any theta with sum(theta) = phi"))
    exact = _exact(max(c, 1 - c))
    return ClosedFormResult(f"GHZ_{n}(c={float(c):g})", float(max(c, 1 - c)), tuple(maximizers), exact)


def lambda_ghz_prime_family(n: int, c: Union[float, Fraction], phi: float=0.0) -> ClosedFormResult:
    """
    sqrt(c)|1010..> + e^{i phi} sqrt(1-c)|0101..>: Lambda = max(c, 1 - c).
    """
    if n % 2:
        raise InvalidStateError(f"GHZ' states need an even number of sites, got {n}")
    _check_c(c)
    ones_first = np.array([ 1.0 - (i % 2) for i in range(n) ])
    maximizers = []
    if c >= 1 - c:
        maximizers.append(Maximizer(ProductParams(ones_first, np.zeros(n)), "any theta"))
    if 1 - c >= c:
        # The phases of the |0> sites of 0101.. carry phi
        theta = np.where(ones_first == 1.0, 2 * phi / n, 0.0)
        maximizers.append(Maximizer(ProductParams(1.0 - ones_first, theta),
                                    "any theta with sum(theta_0-sites) - sum(theta_1-sites) = phi"))
    exact = _exact(max(c, 1 - c))
    return ClosedFormResult(f"GHZp_{n}(c={float(c):g})", float(max(c, 1 - c)), tuple(maximizers), exact)


def lambda_w(n: int) -> ClosedFormResult:
    """
    (1 - 1/N)^(N-1), reached at a_i = 1/N with equal phases.
    """
    exact = Fraction(n - 1, n) ** (n - 1)
    return ClosedFormResult(f"W_{n}", float(exact),
                            (Maximizer(ProductParams.uniform(n, 1.0 / n, 0.0), "any common theta"),), exact)


# (n, orbit representative) -> (name, boundary value, interior candidates as (a, value))
KNOWN_BASIC: Dict[Tuple[int, str], Tuple[str, Fraction, Tuple[Tuple[Fraction, Fraction], ...]]] = {}


def _register(name: str, seed: str, value: Fraction, *interior: Tuple[Fraction, Fraction]) -> None:
    s = SeedPattern.from_string(seed)
    KNOWN_BASIC[(s.n_sites, str(s.representative()))] = (name, value, tuple(interior))


_register("psi_4", "1100", Fraction(1, 4), (Fraction(1, 2), Fraction(1, 4)))
_register("psi1a_5", "11000", Fraction(1, 5))
_register("psi1b_5", "10100", Fraction(1, 5))
_register("psi1a_6", "110000", Fraction(1, 6))
_register("psi1b_6", "101000", Fraction(1, 6))
_register("psi2a_6", "111000", Fraction(1, 6), (Fraction(1, 2), Fraction(3, 32)))
_register("psi3_6", "100100", Fraction(1, 3), (Fraction(1, 3), Fraction(16, 3 ** 5)))
_register("psi1_8", "10001000", Fraction(1, 4), (Fraction(1, 4), Fraction(3 ** 6, 4 ** 7)))
_register("psi2_8", "11001100", Fraction(1, 4), (Fraction(1, 2), Fraction(1, 2 ** 6)))


def lambda_known_basic(seed: Union[SeedPattern, str]) -> Union[ClosedFormResult, str]:
    """
    Catalog lookup for basic TI states by orbit.

    Besides the solved catalog, constant seeds (product states), the W seed
    and the alternating seed (GHZ') resolve through their closed forms.
    Anything else returns UNKNOWN.
    """
    if isinstance(seed, str):
        seed = SeedPattern.from_string(seed)
    n = seed.n_sites
    rep = seed.representative()

    if seed.is_constant:
        return ClosedFormResult(f"product[{seed}]", 1.0,
                                (Maximizer(ProductParams(np.array(seed.bits, dtype=float), np.zeros(n)), "any theta"),),
                                Fraction(1))
    if sum(seed.bits) == 1:
        return lambda_w(n)
    if n % 2 == 0 and len(rep.orbit()) == 2 and sum(seed.bits) * 2 == n:
        return lambda_ghz_prime_family(n, Fraction(1, 2), 0.0)

    entry = KNOWN_BASIC.get((n, str(rep)))
    if entry is None:
        return UNKNOWN

    name, value, interior = entry
    maximizers = tuple(Maximizer(ProductParams(np.array(s.bits, dtype=float), np.zeros(n)), "any theta")
                       for s in rep.orbit())
    candidates = [ Candidate("boundary", float(value), value, maximizers[0].params) ]
    for a, v in interior:
        candidates.append(Candidate("interior", float(v), v, ProductParams.uniform(n, float(a), 0.0)))

    best = max(candidates, key=lambda c: c.exact)
    if best.kind == "interior" and best.exact > value:
        logger.warning("Interior candidate %s beats the boundary value %s for %s", best.exact, value, name)
    return ClosedFormResult(name, float(best.exact), maximizers, best.exact, tuple(candidates))


def w_prime_solver(c0: float, c1: float, c2: float, alpha: float=0.0, beta: float=0.0) -> ClosedFormResult:
    """
    Maximal overlap of c0|100> + c1 e^{i alpha}|010> + c2 e^{i beta}|001>.

    The phases theta = ((alpha+beta)/2, (beta-alpha)/2, (alpha-beta)/2) align
    the three terms. With u_i = sqrt(a_i / (1 - a_i)) and x = u1 u2, y = u2 u3,
    z = u1 u3 the stationarity conditions become the linear system

        c1 x + c2 z = c0
        c0 x + c2 y = c1
        c0 z + c1 y = c2

    solved by x = (1 - 2 c2^2) / (2 c0 c1), y = (1 - 2 c0^2) / (2 c1 c2),
    z = (1 - 2 c1^2) / (2 c0 c2). When x, y, z > 0 this is the only interior
    stationary point, and any a_i in (0, 1) is possible there. It is compared
    against the vertices a = e_k (value c_k^2); on the faces the maximum is
    always at a vertex.
    """
    c = np.array([c0, c1, c2], dtype=float)
    if np.any(c < 0):
        raise InvalidStateError(f"Coefficients must be nonnegative, got {c.tolist()}")
    if abs(np.sum(c ** 2) - 1) > 1e-9:
        raise InvalidStateError(f"Coefficients must satisfy c0^2 + c1^2 + c2^2 = 1, got {np.sum(c ** 2)!r}")

    theta = np.array([ (alpha + beta) / 2, (beta - alpha) / 2, (alpha - beta) / 2 ])

    candidates = []
    for k in range(3):
        a = np.zeros(3)
        a[k] = 1.0
        candidates.append(Candidate("boundary", float(c[k] ** 2), _exact(c[k] ** 2), ProductParams(a, theta)))

    if np.all(c > 1e-12):
        x = (1 - 2 * c[2] ** 2) / (2 * c[0] * c[1])
        y = (1 - 2 * c[0] ** 2) / (2 * c[1] * c[2])
        z = (1 - 2 * c[1] ** 2) / (2 * c[0] * c[2])
        if x > 0 and y > 0 and z > 0:
            u_sq = np.array([ x * z / y, x * y / z, y * z / x ])
            a = u_sq / (1 + u_sq)
            f = (c[0] * np.sqrt(a[0] * (1 - a[1]) * (1 - a[2]))
                 + c[1] * np.sqrt((1 - a[0]) * a[1] * (1 - a[2]))
                 + c[2] * np.sqrt((1 - a[0]) * (1 - a[1]) * a[2]))
            candidates.append(Candidate("interior", float(f ** 2), None, ProductParams(a, theta)))
        else:
            logger.debug("No interior stationary point for %s", c.tolist())
    else:
        logger.debug("Degenerate coefficients %s, only vertices remain", c.tolist())

    best = max(candidates, key=lambda cand: cand.value)
    return ClosedFormResult("W'", best.value, (Maximizer(best.params, "common theta offset"),),
                            best.exact, tuple(candidates))
