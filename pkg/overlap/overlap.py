"""
    Squared overlap between a pure state and the product-state ansatz

        |phi> = (x)_i ( sqrt(a_i)|1>_i + e^{i theta_i} sqrt(1-a_i)|0>_i )

    with its analytic gradient and parameter tying.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from geoent.states.qstate import PureState, SeedPattern, DimensionMismatch


__all__ = [
    "ProductParams",
    "TyingPattern",
    "OverlapGradient",
    "product_amplitudes",
    "product_vector",
    "overlap_sq",
    "overlap_sq_batch",
    "overlap_sq_grad",
    "expand_tied",
    "tying_from_seed",
    "shift_params",
    "ti_mixture_overlap",
]

logger = logging.getLogger(__name__)

TWO_PI = 2 * np.pi
BOUNDARY_STEP = 1e-7


@dataclass(frozen=True, eq=False)
class ProductParams:
    """
    Per-site amplitudes a_i in [0, 1] and phases theta_i stored mod 2 pi.
    """
    a: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        theta = np.mod(np.array(self.theta, dtype=float).reshape(-1), TWO_PI)
        if a.shape != theta.shape:
            raise DimensionMismatch(f"a has {a.shape[0]} sites but theta has {theta.shape[0]}")
        if np.any(~np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
            raise ValueError(f"All a_i must lie in [0, 1], got {a}")
        a.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", theta)

    @property
    def n_sites(self) -> int:
        return self.a.shape[0]

    @staticmethod
    def uniform(n: int, a: float, theta: float=0.0) -> "ProductParams":
        return ProductParams(np.full(n, a), np.full(n, theta))

    def to_dict(self) -> Dict[str, List[float]]:
        return {"a": self.a.tolist(), "theta": self.theta.tolist()}

    @staticmethod
    def from_dict(data: Dict) -> "ProductParams":
        return ProductParams(data["a"], data["theta"])

    def __repr__(self):
        return f"ProductParams(a={np.round(self.a, 6).tolist()}, theta={np.round(self.theta, 6).tolist()})"


@dataclass(frozen=True)
class TyingPattern:
    """
    Partition of the sites into classes sharing (a, theta).
    """
    class_of: Tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(c) for c in self.class_of)
        if not labels:
            raise ValueError("Empty tying pattern")
        if set(labels) != set(range(max(labels) + 1)):
            raise ValueError(f"Class labels must form the range 0..k-1, got {labels}")
        object.__setattr__(self, "class_of", labels)

    @staticmethod
    def free(n: int) -> "TyingPattern":
        return TyingPattern(tuple(range(n)))

    @staticmethod
    def permutation_invariant(n: int) -> "TyingPattern":
        return TyingPattern((0,) * n)

    @property
    def n_sites(self) -> int:
        return len(self.class_of)

    @property
    def n_classes(self) -> int:
        return max(self.class_of) + 1

    @property
    def is_permutation_invariant(self) -> bool:
        return self.n_classes == 1

    def classes(self) -> List[List[int]]:
        out = [ [] for _ in range(self.n_classes) ]
        for site, k in enumerate(self.class_of):
            out[k].append(site)
        return out

    def canonical(self) -> "TyingPattern":
        """ Relabel classes in order of first appearance """
        relabel = {}
        for k in self.class_of:
            relabel.setdefault(k, len(relabel))
        return TyingPattern(tuple(relabel[k] for k in self.class_of))

    def same_partition(self, other: "TyingPattern") -> bool:
        return self.canonical() == other.canonical()

    def reduce(self, site_values: np.ndarray) -> np.ndarray:
        """ Sum per-site values over every class (chain rule for tied parameters) """
        return np.bincount(np.array(self.class_of), weights=np.asarray(site_values, dtype=float), minlength=self.n_classes)

    def restrict(self, params: ProductParams) -> Tuple[np.ndarray, np.ndarray]:
        """ Class values taken from the first site of every class """
        first = [ c[0] for c in self.classes() ]
        return params.a[first].copy(), params.theta[first].copy()

    def to_dict(self) -> List[int]:
        return list(self.class_of)

    @staticmethod
    def from_dict(data: Sequence[int]) -> "TyingPattern":
        return TyingPattern(tuple(data))


class OverlapGradient(NamedTuple):
    d_a: np.ndarray
    d_theta: np.ndarray
    one_sided: np.ndarray   # True where d_a is a one-sided difference at a_i in {0, 1}


def _site_factors(a: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """ (..., N, 2) single-site amplitudes, index 0 <-> |0>, 1 <-> |1> """
    f = np.empty(a.shape + (2,), dtype=np.complex128)
    f[..., 0] = np.exp(1j * theta) * np.sqrt(1 - a)
    f[..., 1] = np.sqrt(a)
    return f


def _kron_sites(f: np.ndarray) -> np.ndarray:
    """ Tensor product over the site axis of (B, N, 2) factors, site 0 most significant """
    v = f[:, 0, :]
    for i in range(1, f.shape[1]):
        v = (v[:, :, None] * f[:, i, None, :]).reshape(v.shape[0], -1)
    return v


def product_amplitudes(a: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """
    Product-state amplitude vectors for a batch of parameters.

    Args:
        a: (B, N) or (N,) array of amplitudes
        theta: phases of the same shape

    Returns:
        (B, 2^N) or (2^N,) complex array
    """
    a = np.asarray(a, dtype=float)
    theta = np.asarray(theta, dtype=float)
    single = a.ndim == 1
    v = _kron_sites(_site_factors(np.atleast_2d(a), np.atleast_2d(theta)))
    return v[0] if single else v


def product_vector(params: ProductParams) -> PureState:
    return PureState(params.n_sites, product_amplitudes(params.a, params.theta))


def _check_match(psi: PureState, n: int) -> None:
    if psi.n_sites != n:
        raise DimensionMismatch(f"State has {psi.n_sites} sites but parameters have {n}")


def overlap_sq(psi: PureState, params: ProductParams) -> float:
    """
    |<psi|phi(params)>|^2
    """
    _check_match(psi, params.n_sites)
    s = np.vdot(psi.amplitudes, product_amplitudes(params.a, params.theta))
    return float(min(1.0, max(0.0, abs(s) ** 2)))


def overlap_sq_batch(psi: PureState, a: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """
    Squared overlaps for (B, N) parameter arrays.
    """
    a = np.atleast_2d(a)
    _check_match(psi, a.shape[1])
    s = product_amplitudes(a, np.atleast_2d(theta)) @ np.conj(psi.amplitudes)
    return np.clip(np.abs(s) ** 2, 0.0, 1.0)


def _environments(psi: PureState, f: np.ndarray) -> np.ndarray:
    """
    env[i, bit] = sum over strings with b_i = bit of conj(psi_b) * prod_{j != i} f_j(b_j)
    """
    n = psi.n_sites
    t = np.conj(psi.amplitudes)
    prefix = [ np.ones(1, dtype=np.complex128) ]
    for i in range(n - 1):
        prefix.append(np.kron(prefix[-1], f[i]))
    suffix = [ np.ones(1, dtype=np.complex128) ]
    for i in range(n - 1, 0, -1):
        suffix.append(np.kron(f[i], suffix[-1]))
    suffix.reverse()

    env = np.empty((n, 2), dtype=np.complex128)
    for i in range(n):
        env[i] = np.einsum("abc,a,c->b", t.reshape(1 << i, 2, 1 << (n - 1 - i)), prefix[i], suffix[i])
    return env


def overlap_sq_grad(psi: PureState, params: ProductParams) -> OverlapGradient:
    """
    Partial derivatives of overlap_sq with respect to every a_i and theta_i.

    The a-derivative is singular at a_i in {0, 1}; there a one-sided difference
    quotient (step 1e-7, pointing into [0, 1]) is returned and flagged.
    """
    _check_match(psi, params.n_sites)
    a, theta = params.a, params.theta
    f = _site_factors(a, theta)
    env = _environments(psi, f)
    s = np.dot(env[0], f[0])

    d_a = np.zeros(a.shape[0])
    one_sided = (a <= 0.0) | (a >= 1.0)
    interior = ~one_sided

    phase = np.exp(1j * theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        ds_da = env[:, 1] / (2 * np.sqrt(a)) - env[:, 0] * phase / (2 * np.sqrt(1 - a))
    d_a[interior] = 2 * np.real(np.conj(s) * ds_da[interior])

    ds_dtheta = env[:, 0] * 1j * phase * np.sqrt(1 - a)
    d_theta = 2 * np.real(np.conj(s) * ds_dtheta)

    if np.any(one_sided):
        base = abs(s) ** 2
        for i in np.flatnonzero(one_sided):
            step = BOUNDARY_STEP if a[i] <= 0.0 else -BOUNDARY_STEP
            fi = _site_factors(np.array([a[i] + step]), theta[i:i + 1])[0]
            value = abs(np.dot(env[i], fi)) ** 2
            d_a[i] = (value - base) / step
        logger.debug("One-sided a-derivatives at sites %s", np.flatnonzero(one_sided).tolist())

    return OverlapGradient(d_a, d_theta, one_sided)


def expand_tied(tying: TyingPattern, class_a: Sequence[float], class_theta: Sequence[float]) -> ProductParams:
    """
    Copy class values to every site of the class.
    """
    class_a = np.asarray(class_a, dtype=float).reshape(-1)
    class_theta = np.asarray(class_theta, dtype=float).reshape(-1)
    if class_a.shape[0] != tying.n_classes or class_theta.shape[0] != tying.n_classes:
        raise DimensionMismatch(f"Tying has {tying.n_classes} classes, got {class_a.shape[0]} a-values "
                                f"and {class_theta.shape[0]} theta-values")
    idx = np.array(tying.class_of)
    return ProductParams(class_a[idx], class_theta[idx])


def tying_from_seed(seed: SeedPattern) -> TyingPattern:
    """
    Two classes: the sites of the seed's 1-bits and those of its 0-bits.
    Constant seeds give the permutation-invariant tying.
    """
    first = seed.bits[0]
    return TyingPattern(tuple(0 if b == first else 1 for b in seed.bits))


def shift_params(params: ProductParams, steps: int) -> ProductParams:
    """
    Move the parameters of every site `steps` sites along the ring,
    consistent with cyclic_shift of the product vector.
    """
    return ProductParams(np.roll(params.a, steps), np.roll(params.theta, steps))


def ti_mixture_overlap(psi: PureState, params: ProductParams) -> float:
    """
    <psi| rho |psi> for rho the equal incoherent mixture of all cyclic
    shifts of the product state. A separable state with the ring symmetry.
    """
    n = params.n_sites
    a = np.stack([ np.roll(params.a, s) for s in range(n) ])
    theta = np.stack([ np.roll(params.theta, s) for s in range(n) ])
    return float(np.mean(overlap_sq_batch(psi, a, theta)))
