"""Symbolic holomorphic functions vanishing at 0, their evaluation, Taylor
coefficients, and entrywise amplification to matrix arguments.

Two kinds of domain coexist: disk functions (power series, Blaschke products,
Möbius quotients and their sums/products) act entrywise on complex matrices in
the open spectral unit ball; functional composites act on matrices over a
concrete operator space by first applying a certified linear functional
entrywise and then the scalar part.  Every variant takes the value 0 at 0,
which is what makes zero-padding invariant under amplification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import ConfigurationError, DomainError, InvalidInputError
from .opspace import ConcreteOperatorSpace, OpSpaceElement, OpSpaceMatrix, matrix_norm, same_space

# Amplification through a functional rejects scalar images this close to the
# boundary; it only fires if a certified_norm claim was wrong.
_IMAGE_GUARD = 1e-9

_FOURIER_POINTS = 4096
_MAX_TRUNCATION = _FOURIER_POINTS // 2


class HoloFunction:
    """Base class; concrete variants are the dataclasses below."""

    @property
    def domain_space(self) -> ConcreteOperatorSpace | None:
        """None for disk functions, the concrete space for functional composites."""
        return None


def _check_functional(space, phi, certified_norm):
    if not isinstance(space, ConcreteOperatorSpace):
        raise InvalidInputError("functional variants need a ConcreteOperatorSpace")
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (space.dim,):
        raise InvalidInputError(f"functional must have {space.dim} coefficients")
    if not np.all(np.isfinite(phi)):
        raise InvalidInputError("functional coefficients must be finite")
    if certified_norm is None:
        raise ConfigurationError("functional has no certified norm")
    certified_norm = float(certified_norm)
    if not 0.0 <= certified_norm < 1.0:
        raise ConfigurationError(f"certified norm must lie in [0, 1), got {certified_norm}")
    return phi, certified_norm


@dataclass(frozen=True, eq=False)
class PowerSeries(HoloFunction):
    """Polynomial Σ_{n>=1} coeffs[n-1]·z^n (no constant term by construction).

    `analytic_radius` is the radius of analyticity claimed by the caller; it
    only matters once the series is combined with other variants.
    """

    coeffs: np.ndarray
    analytic_radius: float = math.inf

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128))
        if c.ndim != 1 or c.size < 1:
            raise InvalidInputError("coefficients must be a non-empty 1-D array")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        r = float(self.analytic_radius)
        if not r >= 1.0:
            raise InvalidInputError(f"analytic radius must be >= 1, got {r}")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "analytic_radius", r)


@dataclass(frozen=True, eq=False)
class Blaschke(HoloFunction):
    """Finite Blaschke product c·z^m·Π_j (z − a_j)/(1 − conj(a_j)·z), m >= 1."""

    c: complex
    m: int
    zeros: np.ndarray

    def __post_init__(self):
        c = complex(self.c)
        if abs(abs(c) - 1.0) > 1e-12:
            raise InvalidInputError(f"leading constant must be unimodular, got |c|={abs(c)}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise InvalidInputError("zero order at the origin must be a positive integer")
        z = np.asarray(self.zeros, dtype=np.complex128).reshape(-1)
        if z.size and np.max(np.abs(z)) >= 1.0:
            raise InvalidInputError("Blaschke zeros must lie strictly inside the disk")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "zeros", z)


@dataclass(frozen=True, eq=False)
class MoebiusQuotient(HoloFunction):
    """inner(z) / (1 − a·z) for a disk-domain inner function and |a| < 1."""

    inner: HoloFunction
    a: complex

    def __post_init__(self):
        if not isinstance(self.inner, HoloFunction) or self.inner.domain_space is not None:
            raise InvalidInputError("quotient inner function must be disk-domain")
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise InvalidInputError(f"quotient parameter must satisfy |a| < 1, got {abs(a)}")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True, eq=False)
class GeometricPhi(HoloFunction):
    """x ↦ φ(x)/(1 − φ(x)) for a functional with certified norm < 1."""

    space: ConcreteOperatorSpace
    phi: np.ndarray
    certified_norm: float

    def __post_init__(self):
        phi, r = _check_functional(self.space, self.phi, self.certified_norm)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "certified_norm", r)

    @property
    def domain_space(self):
        return self.space


@dataclass(frozen=True, eq=False)
class Composite(HoloFunction):
    """x ↦ scalar(φ(x)): a disk function precomposed with a certified functional."""

    scalar: HoloFunction
    space: ConcreteOperatorSpace
    phi: np.ndarray
    certified_norm: float

    def __post_init__(self):
        if not isinstance(self.scalar, HoloFunction) or self.scalar.domain_space is not None:
            raise InvalidInputError("composite scalar part must be disk-domain")
        phi, r = _check_functional(self.space, self.phi, self.certified_norm)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "certified_norm", r)

    @property
    def domain_space(self):
        return self.space


def _common_space(left: HoloFunction, right: HoloFunction):
    ls, rs = left.domain_space, right.domain_space
    if ls is None and rs is None:
        return None
    if ls is not None and rs is not None and same_space(ls, rs):
        return ls
    raise InvalidInputError("operands must share a domain (both disk, or the same space)")


@dataclass(frozen=True, eq=False)
class Product(HoloFunction):
    left: HoloFunction
    right: HoloFunction

    def __post_init__(self):
        object.__setattr__(self, "_space", _common_space(self.left, self.right))

    @property
    def domain_space(self):
        return self._space


@dataclass(frozen=True, eq=False)
class Sum(HoloFunction):
    left: HoloFunction
    right: HoloFunction

    def __post_init__(self):
        object.__setattr__(self, "_space", _common_space(self.left, self.right))

    @property
    def domain_space(self):
        return self._space


@dataclass(frozen=True, eq=False)
class Scale(HoloFunction):
    """c·inner; nested scales collapse at construction to a canonical form."""

    c: complex
    inner: HoloFunction

    def __post_init__(self):
        c = complex(self.c)
        inner = self.inner
        if not np.isfinite(c.real) or not np.isfinite(c.imag):
            raise InvalidInputError("scale factor must be finite")
        while isinstance(inner, Scale):
            c *= inner.c
            inner = inner.inner
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "inner", inner)

    @property
    def domain_space(self):
        return self.inner.domain_space


@dataclass(frozen=True)
class TaylorCoeffs:
    """Coefficients a_1..a_K at 0 plus a bound on Σ_{n>K}|a_n| (None = unknown)."""

    coeffs: np.ndarray
    truncation: int
    tail_bound: float | None


# ---------------------------------------------------------------------------
# Evaluation


def _eval_array(f: HoloFunction, z):
    """Entrywise evaluation of a disk-domain function on a complex array."""
    if isinstance(f, PowerSeries):
        nonzero = np.flatnonzero(f.coeffs)
        if f.coeffs.size > 64 and nonzero.size <= f.coeffs.size // 8:
            # Long lacunary series: summing powers beats dense Horner.
            out = np.zeros_like(z)
            for i in nonzero:
                out = out + f.coeffs[i] * z ** (i + 1)
            return out
        acc = np.zeros_like(z)
        for a in f.coeffs[::-1]:
            acc = acc * z + a
        return acc * z
    if isinstance(f, Blaschke):
        out = f.c * z**f.m
        for a in f.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out
    if isinstance(f, MoebiusQuotient):
        return _eval_array(f.inner, z) / (1.0 - f.a * z)
    if isinstance(f, Product):
        return _eval_array(f.left, z) * _eval_array(f.right, z)
    if isinstance(f, Sum):
        return _eval_array(f.left, z) + _eval_array(f.right, z)
    if isinstance(f, Scale):
        return f.c * _eval_array(f.inner, z)
    raise InvalidInputError(f"{type(f).__name__} is not a disk-domain function")


def _functional_image(entries: np.ndarray, phi: np.ndarray) -> np.ndarray:
    s = entries @ phi
    if matcore.operator_norm(s) >= 1.0 - _IMAGE_GUARD:
        raise DomainError(
            "scalar image of the functional reached the guard radius; "
            "its certified norm looks wrong"
        )
    return s


def _amplify_space_entries(f: HoloFunction, entries: np.ndarray) -> np.ndarray:
    if isinstance(f, GeometricPhi):
        s = _functional_image(entries, f.phi)
        return s / (1.0 - s)
    if isinstance(f, Composite):
        return _eval_array(f.scalar, _functional_image(entries, f.phi))
    if isinstance(f, Product):
        return _amplify_space_entries(f.left, entries) * _amplify_space_entries(f.right, entries)
    if isinstance(f, Sum):
        return _amplify_space_entries(f.left, entries) + _amplify_space_entries(f.right, entries)
    if isinstance(f, Scale):
        return f.c * _amplify_space_entries(f.inner, entries)
    raise InvalidInputError(f"{type(f).__name__} cannot be amplified over a space")


def amplify(f: HoloFunction, x) -> np.ndarray:
    """Apply f entrywise to a matrix in the open unit ball of its domain.

    Disk functions take a complex matrix with operator norm < 1; functional
    composites take an OpSpaceMatrix with matrix norm < 1 and go through the
    scalar image (φ(x_ij)).
    """
    space = f.domain_space
    if space is None:
        z = matcore.as_matrix(x)
        nrm = matcore.operator_norm(z)
        if nrm >= 1.0:
            raise DomainError(f"matrix argument must have operator norm < 1, got {nrm}")
        return _eval_array(f, z)
    if not isinstance(x, OpSpaceMatrix) or not same_space(x.space, space):
        raise InvalidInputError("argument must be an OpSpaceMatrix over the function's domain space")
    nrm = matrix_norm(x)
    if nrm >= 1.0:
        raise DomainError(f"matrix argument must have matrix norm < 1, got {nrm}")
    return _amplify_space_entries(f, x.entries)


def evaluate(f: HoloFunction, z) -> complex:
    """Evaluate at a single point of the open unit ball.

    Disk functions take a complex number |z| < 1; functional composites take
    an OpSpaceElement (or a 1×1 OpSpaceMatrix) of norm < 1.
    """
    if f.domain_space is None:
        z = complex(z)
        if abs(z) >= 1.0:
            raise DomainError(f"evaluation point must satisfy |z| < 1, got |z|={abs(z)}")
        return complex(_eval_array(f, np.complex128(z)))
    if isinstance(z, OpSpaceElement):
        z = z.as_level1()
    if not isinstance(z, OpSpaceMatrix) or z.level != 1:
        raise InvalidInputError("evaluation over a space needs a level-1 argument")
    return complex(amplify(f, z)[0, 0])


# ---------------------------------------------------------------------------
# Taylor coefficients


def analyticity_radius(f: HoloFunction) -> float:
    """Radius of analyticity around 0 implied by the construction (may be inf)."""
    if isinstance(f, PowerSeries):
        return f.analytic_radius
    if isinstance(f, Blaschke):
        if f.zeros.size == 0:
            return math.inf
        return float(1.0 / np.max(np.abs(f.zeros)))
    if isinstance(f, MoebiusQuotient):
        pole = math.inf if f.a == 0 else 1.0 / abs(f.a)
        return min(analyticity_radius(f.inner), pole)
    if isinstance(f, (Product, Sum)):
        return min(analyticity_radius(f.left), analyticity_radius(f.right))
    if isinstance(f, Scale):
        return analyticity_radius(f.inner)
    raise InvalidInputError(f"{type(f).__name__} is not a disk-domain function")


def _circle_samples(f: HoloFunction, radius: float) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(_FOURIER_POINTS) / _FOURIER_POINTS
    return _eval_array(f, radius * np.exp(1j * angles))


def _cauchy_tail(f: HoloFunction, analytic_r: float, truncation: int) -> float:
    # Sample max on a circle strictly between 1 and the analyticity radius;
    # the 1.01 factor cushions the sampled max standing in for the true sup.
    r = min(0.5 * (1.0 + analytic_r), 2.0)
    peak = float(np.max(np.abs(_circle_samples(f, r)))) * 1.01
    return peak * r ** (-truncation) / (r - 1.0)


def taylor_coefficients(f: HoloFunction, truncation: int) -> TaylorCoeffs:
    """Coefficients a_1..a_K of the expansion at 0.

    Power series are copied exactly.  Anything analytic past the closed disk
    is inverted by a 4096-point discrete Fourier transform on the circle of
    radius min(1, (1+R)/2) with a Cauchy-estimate tail bound; remaining
    compositions use radius 0.9 and report an unknown tail.
    """
    if f.domain_space is not None:
        raise InvalidInputError("Taylor extraction needs a disk-domain function")
    k = int(truncation)
    if not 1 <= k <= _MAX_TRUNCATION:
        raise InvalidInputError(f"truncation must lie in [1, {_MAX_TRUNCATION}], got {k}")
    if isinstance(f, PowerSeries):
        coeffs = np.zeros(k, dtype=np.complex128)
        n = min(k, f.coeffs.size)
        coeffs[:n] = f.coeffs[:n]
        tail = float(np.sum(np.abs(f.coeffs[k:]))) if f.coeffs.size > k else 0.0
        return TaylorCoeffs(coeffs, k, tail)
    radius = analyticity_radius(f)
    if radius > 1.0 + 1e-12:
        rho = min(1.0, 0.5 * (1.0 + radius))
        tail = _cauchy_tail(f, radius, k)
    else:
        rho = 0.9
        tail = None
    hat = np.fft.fft(_circle_samples(f, rho)) / _FOURIER_POINTS
    powers = rho ** np.arange(1, k + 1)
    return TaylorCoeffs(hat[1 : k + 1] / powers, k, tail)


# ---------------------------------------------------------------------------
# Argument rescaling (exact, structure-preserving)


def rescale_argument(f: HoloFunction, t: float) -> HoloFunction:
    """The disk function z ↦ f(t·z) for 0 < t <= 1, built without approximation.

    Blaschke products lose their product shape under the substitution and come
    back as an expanded numerator polynomial under nested Möbius quotients.
    """
    t = float(t)
    if not 0.0 < t <= 1.0:
        raise InvalidInputError(f"rescale factor must lie in (0, 1], got {t}")
    if f.domain_space is not None:
        raise InvalidInputError("argument rescaling applies to disk-domain functions")
    if isinstance(f, PowerSeries):
        powers = t ** np.arange(1, f.coeffs.size + 1)
        return PowerSeries(f.coeffs * powers, analytic_radius=f.analytic_radius / t)
    if isinstance(f, Blaschke):
        poly = np.array([f.c * t**f.m], dtype=np.complex128)
        for a in f.zeros:
            poly = np.convolve(poly, np.array([-a, t], dtype=np.complex128))
        full = np.concatenate([np.zeros(f.m, dtype=np.complex128), poly])
        out: HoloFunction = PowerSeries(full[1:], analytic_radius=math.inf)
        for a in f.zeros:
            out = MoebiusQuotient(out, np.conj(a) * t)
        return out
    if isinstance(f, MoebiusQuotient):
        return MoebiusQuotient(rescale_argument(f.inner, t), f.a * t)
    if isinstance(f, Product):
        return Product(rescale_argument(f.left, t), rescale_argument(f.right, t))
    if isinstance(f, Sum):
        return Sum(rescale_argument(f.left, t), rescale_argument(f.right, t))
    if isinstance(f, Scale):
        return Scale(f.c, rescale_argument(f.inner, t))
    raise InvalidInputError(f"cannot rescale {type(f).__name__}")
