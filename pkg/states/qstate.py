"""
    Pure N-qubit states on a ring: basic translationally invariant (TI) states
    built from seed bitstrings, the GHZ/GHZ'/W/Dicke families and hybrid
    superpositions of them.

    Basis convention: site 0 is the most significant bit of the basis index and
    bit value 1 is the single-party state |1>. Site indices in this package are
    0-based.
"""

import re
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np


__all__ = [
    "MAX_SITES",
    "InvalidStateError",
    "MalformedSeed",
    "DimensionMismatch",
    "UnknownFamily",
    "PureState",
    "SeedPattern",
    "HybridSpec",
    "cyclic_shift",
    "term_period",
    "make_basic_ti",
    "make_ghz_family",
    "make_ghz_prime_family",
    "make_w",
    "make_dicke",
    "superpose",
    "enumerate_basic_seeds",
    "apply_x",
    "term_periods",
    "seed_of",
    "is_permutation_invariant",
    "common_weight",
    "named_state",
    "named_seed",
    "NAMED_SEEDS",
]

logger = logging.getLogger(__name__)

MAX_SITES = 16
NORM_TOL = 1e-12


class InvalidStateError(ValueError):
    """ State arguments outside of their domain """


class MalformedSeed(ValueError):
    """ Seed is not a bitstring """


class DimensionMismatch(ValueError):
    """ Objects defined over a different number of sites """


class UnknownFamily(KeyError):
    """ Name does not refer to any known state family """


def _check_sites(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= MAX_SITES:
        raise InvalidStateError(f"Number of sites must be an integer in [2, {MAX_SITES}], got {n!r}")
    return int(n)


def _bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def _index_bits(n: int) -> np.ndarray:
    """
    (2^n, n) array of the basis bitstrings, site 0 in column 0.
    """
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1).astype(np.int8)


def _rotate_indices(n: int, steps: int) -> np.ndarray:
    """
    Basis index of every bitstring after moving each site's content `steps` sites forward.
    """
    steps %= n
    idx = np.arange(1 << n)
    if steps == 0:
        return idx
    mask = (1 << n) - 1
    return (idx >> steps) | ((idx << (n - steps)) & mask)


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Normalized amplitude vector over the 2^N computational basis.
    """
    n_sites: int
    amplitudes: np.ndarray
    label: str = ""
    orthogonal: Optional[bool] = None
    component_periods: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        n = _check_sites(self.n_sites)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << n:
            raise DimensionMismatch(f"{n} sites need {1 << n} amplitudes, got {amps.shape[0]}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"State is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "component_periods", frozenset(self.component_periods))

    @classmethod
    def normalized(cls, n_sites: int, amplitudes: Iterable[complex], **kwargs) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidStateError("Zero vector cannot be normalized")
        return cls(n_sites, amps / norm, **kwargs)

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def support(self, tol: float=NORM_TOL) -> np.ndarray:
        """ Basis indices with a nonzero amplitude """
        return np.flatnonzero(np.abs(self.amplitudes) > tol)

    def allclose(self, other: "PureState", atol: float=1e-12) -> bool:
        return self.n_sites == other.n_sites and bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol))

    def to_dict(self) -> Dict:
        return {
            "n": self.n_sites,
            "amps": [ [float(a.real), float(a.imag)] for a in self.amplitudes ],
        }

    @staticmethod
    def from_dict(data: Dict) -> "PureState":
        amps = np.array([ complex(re_, im_) for re_, im_ in data["amps"] ], dtype=np.complex128)
        return PureState(int(data["n"]), amps)

    def __repr__(self):
        return f"PureState(n_sites={self.n_sites}, label={self.label!r}, terms={len(self.support())})"


@dataclass(frozen=True)
class SeedPattern:
    """
    Seed bitstring of a basic TI state.
    """
    n_sites: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise MalformedSeed(f"Seed bits must be 0 or 1, got {self.bits!r}")
        if len(bits) != self.n_sites:
            raise MalformedSeed(f"Seed has {len(bits)} bits but n_sites={self.n_sites}")
        _check_sites(self.n_sites)
        object.__setattr__(self, "bits", bits)

    @staticmethod
    def from_string(text: str) -> "SeedPattern":
        text = text.strip()
        if not re.fullmatch(r"[01]+", text):
            raise MalformedSeed(f"Malformed seed {text!r}: expected a bitstring over {{0,1}}")
        try:
            return SeedPattern(len(text), tuple(int(c) for c in text))
        except InvalidStateError as e:
            raise MalformedSeed(str(e)) from e

    @property
    def is_constant(self) -> bool:
        """ All-zero and all-one seeds generate product states """
        return len(set(self.bits)) == 1

    @property
    def index(self) -> int:
        return _bits_to_index(self.bits)

    def rotate(self, steps: int) -> "SeedPattern":
        """ Move every bit `steps` sites forward along the ring """
        steps %= self.n_sites
        return SeedPattern(self.n_sites, self.bits[-steps:] + self.bits[:-steps] if steps else self.bits)

    def orbit(self) -> List["SeedPattern"]:
        """ Distinct cyclic shifts in order of increasing shift """
        out = []
        for s in range(self.n_sites):
            r = self.rotate(s)
            if r == self and s > 0:
                break
            out.append(r)
        return out

    def representative(self) -> "SeedPattern":
        """ Lexicographically smallest rotation """
        return min(self.orbit(), key=lambda s: s.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    def to_dict(self) -> str:
        return str(self)

    @staticmethod
    def from_dict(data: str) -> "SeedPattern":
        return SeedPattern.from_string(data)


@dataclass(frozen=True)
class HybridSpec:
    """
    Coefficient-weighted superposition of pure states.
    """
    components: Tuple[Tuple[PureState, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((s, complex(c)) for s, c in self.components))
        if not self.components:
            raise InvalidStateError("HybridSpec needs at least one component")

    @property
    def n_sites(self) -> int:
        return self.components[0][0].n_sites

    @property
    def states(self) -> List[PureState]:
        return [ s for s, _ in self.components ]

    @property
    def coefficients(self) -> List[complex]:
        return [ c for _, c in self.components ]


def cyclic_shift(state: PureState, steps: int) -> PureState:
    """
    Translate every single-party state `steps` sites along the ring.
    shift(|110>, 1) = |011>.
    """
    out = np.empty_like(state.amplitudes)
    out[_rotate_indices(state.n_sites, steps)] = state.amplitudes
    return PureState(state.n_sites, out, label=state.label, orthogonal=state.orthogonal,
                     component_periods=state.component_periods)


def term_period(seed: Union[SeedPattern, str]) -> int:
    """
    Minimal number of cyclic shifts returning the seed to itself.
    """
    if isinstance(seed, str):
        seed = SeedPattern.from_string(seed)
    return len(seed.orbit())


def make_basic_ti(seed: Union[SeedPattern, str], label: Optional[str]=None) -> PureState:
    """
    Equal superposition of the distinct cyclic shifts of the seed basis state.
    """
    if isinstance(seed, str):
        seed = SeedPattern.from_string(seed)
    orbit = seed.orbit()
    amps = np.zeros(1 << seed.n_sites, dtype=np.complex128)
    amps[[ s.index for s in orbit ]] = 1 / np.sqrt(len(orbit))
    if seed.is_constant:
        logger.debug("Seed %s generates the product state |%s>", seed, seed)
    return PureState(seed.n_sites, amps, label=label or f"ti[{seed}]",
                     component_periods=frozenset({len(orbit)}))


def _check_coefficient(c: float) -> float:
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise InvalidStateError(f"Coefficient c must lie in [0, 1], got {c!r}")
    return c


def _two_term(n: int, idx1: int, idx0: int, c: float, phi: float, label: str, period: int) -> PureState:
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[idx1] += np.sqrt(c)
    amps[idx0] += np.exp(1j * phi) * np.sqrt(1 - c)
    return PureState(n, amps, label=label, component_periods=frozenset({period}))


def make_ghz_family(n: int, c: float=0.5, phi: float=0.0) -> PureState:
    """
    sqrt(c)|11...1> + e^{i phi} sqrt(1-c)|00...0>
    """
    n = _check_sites(n)
    c = _check_coefficient(c)
    return _two_term(n, (1 << n) - 1, 0, c, phi, f"GHZ_{n}", 1)


def make_ghz_prime_family(n: int, c: float=0.5, phi: float=0.0) -> PureState:
    """
    sqrt(c)|1010...10> + e^{i phi} sqrt(1-c)|0101...01>
    """
    n = _check_sites(n)
    if n % 2:
        raise InvalidStateError(f"GHZ' states need an even number of sites, got {n}")
    c = _check_coefficient(c)
    even = _bits_to_index([ 1 - (i % 2) for i in range(n) ])
    odd = _bits_to_index([ i % 2 for i in range(n) ])
    return _two_term(n, even, odd, c, phi, f"GHZp_{n}", 2)


def make_w(n: int) -> PureState:
    n = _check_sites(n)
    return make_basic_ti(SeedPattern(n, (1,) + (0,) * (n - 1)), label=f"W_{n}")


def make_dicke(n: int, k: int) -> PureState:
    """
    Dicke state S(N; k): equal superposition of all strings with k zeros (N-k ones).
    """
    n = _check_sites(n)
    if not 1 <= k <= n - 1:
        raise InvalidStateError(f"Dicke state needs 1 <= k <= n-1, got k={k} for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    terms = [ _bits_to_index([ 0 if i in zeros else 1 for i in range(n) ]) for zeros in combinations(range(n), k) ]
    amps[terms] = 1 / np.sqrt(len(terms))
    return PureState(n, amps, label=f"S_{n}_{k}")


def superpose(spec: HybridSpec, orthogonality_tol: float=1e-12) -> PureState:
    """
    Coefficient-weighted sum of the components, renormalized.

    The returned state records whether the components were mutually orthogonal
    and the set of term periods of its components.
    """
    n = spec.n_sites
    for s in spec.states:
        if s.n_sites != n:
            raise DimensionMismatch(f"All components must share n_sites ({n} != {s.n_sites})")

    orthogonal = True
    for (i, a), (j, b) in combinations(enumerate(spec.states), 2):
        ip = abs(np.vdot(a.amplitudes, b.amplitudes))
        if ip > orthogonality_tol:
            orthogonal = False
            logger.warning("Components %d (%s) and %d (%s) are not orthogonal (|<a|b>| = %.3g)", i, a.label, j, b.label, ip)

    total = sum(c * s.amplitudes for s, c in spec.components)
    periods = frozenset().union(*(term_periods(s) for s, c in spec.components if c != 0))
    label = " + ".join(s.label for s, c in spec.components if s.label and c != 0)
    return PureState.normalized(n, total, label=label, orthogonal=orthogonal, component_periods=periods)


def enumerate_basic_seeds(n: int, include_constant: bool=True) -> List[SeedPattern]:
    """
    One representative (lexicographically smallest rotation) per cyclic orbit
    of N-bit strings, sorted by term period and then by representative.

    The constant seeds are the period-1 orbits building the GHZ-like states;
    include_constant=False leaves them out.
    """
    n = _check_sites(n)
    rotations = np.stack([ _rotate_indices(n, s) for s in range(n) ])
    reps = np.unique(rotations.min(axis=0))
    bits = _index_bits(n)
    seeds = [ SeedPattern(n, tuple(int(b) for b in bits[r])) for r in reps ]
    if not include_constant:
        seeds = [ s for s in seeds if not s.is_constant ]
    return sorted(seeds, key=lambda s: (term_period(s), s.bits))


def apply_x(state: PureState, sites: Iterable[int]) -> PureState:
    """
    Apply sigma^x on the given (0-based) sites.
    """
    mask = 0
    for i in sites:
        if not 0 <= i < state.n_sites:
            raise InvalidStateError(f"Site {i} out of range for {state.n_sites} sites")
        mask |= 1 << (state.n_sites - 1 - i)
    out = np.empty_like(state.amplitudes)
    out[np.arange(state.dim) ^ mask] = state.amplitudes
    return PureState(state.n_sites, out)


def term_periods(state: PureState) -> FrozenSet[int]:
    """
    Set of term periods of the basis strings in the support.
    """
    bits = _index_bits(state.n_sites)
    return frozenset(term_period(SeedPattern(state.n_sites, tuple(bits[k]))) for k in state.support())


def seed_of(state: PureState) -> Optional[SeedPattern]:
    """
    Orbit representative of a basic TI state.

    GHZ-like states (support on constant strings only) give the all-ones seed,
    states mixing several orbits or with unequal moduli give None.
    """
    n = state.n_sites
    bits = _index_bits(n)
    support = state.support()
    seeds = [ SeedPattern(n, tuple(bits[k])) for k in support ]
    if all(s.is_constant for s in seeds):
        return SeedPattern(n, (1,) * n)
    reps = { s.representative() for s in seeds }
    if len(reps) != 1 or common_weight(state) is None:
        return None
    rep = reps.pop()
    if len(rep.orbit()) != len(support):
        return None
    return rep


def is_permutation_invariant(state: PureState, tol: float=1e-12) -> bool:
    """
    True when every amplitude depends on the Hamming weight only.
    """
    weights = _index_bits(state.n_sites).sum(axis=1)
    for w in range(state.n_sites + 1):
        amps = state.amplitudes[weights == w]
        if np.max(np.abs(amps - amps[0])) > tol:
            return False
    return True


def common_weight(state: PureState, tol: float=1e-12) -> Optional[float]:
    """
    Common squared amplitude 1/#terms of a uniform-modulus state, else None.
    """
    mods = np.abs(state.amplitudes[state.support()]) ** 2
    if np.max(mods) - np.min(mods) > tol:
        return None
    return 1.0 / len(mods)


# Catalog states, seeds as printed
NAMED_SEEDS: Dict[str, str] = {
    "psi_4": "1100",
    "psi1a_5": "11000",
    "psi1b_5": "10100",
    "psi1a_6": "110000",
    "psi1b_6": "101000",
    "psi2a_6": "111000",
    "psi2b_6": "101100",
    "psi2c_6": "110100",
    "psi3_6": "100100",
    "psi1_8": "10001000",
    "psi2_8": "11001100",
}

_FAMILY_RE = re.compile(r"^(GHZ|GHZp|W)_(\d+)$|^S_(\d+)_(\d+)$")


def named_state(name: str) -> PureState:
    """
    Build a state by its catalog name: GHZ_N, GHZp_N, W_N, S_N_k (Dicke) or
    one of NAMED_SEEDS.
    """
    if name in NAMED_SEEDS:
        return make_basic_ti(NAMED_SEEDS[name], label=name)

    m = _FAMILY_RE.match(name)
    if m is None:
        raise UnknownFamily(f"Unknown state family {name!r}")

    if m.group(1):
        n = int(m.group(2))
        if m.group(1) == "GHZ":
            return make_ghz_family(n, 0.5, 0.0)
        if m.group(1) == "GHZp":
            return make_ghz_prime_family(n, 0.5, 0.0)
        return make_w(n)
    return make_dicke(int(m.group(3)), int(m.group(4)))


def named_seed(name: str) -> SeedPattern:
    """
    Seed used for the tying ansatz of a named state.
    GHZ_N uses the constant seed, GHZp_N the alternating one and W_N "10...0".
    """
    if name in NAMED_SEEDS:
        return SeedPattern.from_string(NAMED_SEEDS[name])
    m = _FAMILY_RE.match(name)
    if m is None or not m.group(1):
        raise UnknownFamily(f"No seed for state {name!r}")
    n = int(m.group(2))
    if m.group(1) == "GHZ":
        return SeedPattern(n, (1,) * n)
    if m.group(1) == "GHZp":
        return SeedPattern(n, tuple(1 - (i % 2) for i in range(n)))
    return SeedPattern(n, (1,) + (0,) * (n - 1))
