"""Dense complex linear algebra: spectral norms, direct sums, Schur products,
and sampling/projection for the operator-norm unit ball.

All functions are pure; randomness is always owned by the caller through an
explicit 64-bit seed, so identical seeds and call sequences reproduce
identical outputs.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

# Full SVD up to this dimension, power iteration on A*A above.  Desk-scale
# inputs stay far below the cutoff; the iteration falls back to a full SVD
# if it stalls, so correctness never depends on spectral gaps.
_FULL_SVD_MAX_DIM = 64

_MAX_SEED = 2**64


def check_seed(seed) -> int:
    """Validate a 64-bit unsigned RNG seed and return it as a plain int."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidInputError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < _MAX_SEED:
        raise InvalidInputError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def derive_rng(seed, *stream) -> np.random.Generator:
    """Deterministic generator for (seed, *stream); each call site owns its own."""
    return np.random.default_rng([check_seed(seed), *(int(s) for s in stream)])


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array, rejecting non-finite entries."""
    try:
        m = np.asarray(a, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"not a complex matrix: {exc}") from None
    if m.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix entries must be finite")
    return m


def operator_norm(a) -> float:
    """Largest singular value, accurate to ~1e-10 relative."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    if max(m.shape) <= _FULL_SVD_MAX_DIM:
        return float(np.linalg.svd(m, compute_uv=False)[0])
    return _power_norm(m)


def _power_norm(m: np.ndarray) -> float:
    b = m.conj().T @ m
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(b.shape[0]) + 1j * rng.standard_normal(b.shape[0])
    v /= np.linalg.norm(v)
    lam = -1.0
    for _ in range(20000):
        w = b @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(nw - lam) <= 1e-13 * nw:
            return float(np.sqrt(nw))
        lam = nw
    # Stalled (near-degenerate top of the spectrum): correctness first.
    return float(np.linalg.svd(m, compute_uv=False)[0])


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal sum A ⊕ B; its norm is max(‖A‖, ‖B‖)."""
    a, b = as_matrix(a), as_matrix(b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def schur_product(a, b) -> np.ndarray:
    """Entrywise product of two same-shaped matrices.

    Its operator norm never exceeds the product of the factors' norms.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch for Schur product: {a.shape} vs {b.shape}")
    return a * b


def _random_ball(rng: np.random.Generator, m: int, radius: float) -> np.ndarray:
    """Complex-Gaussian m×m draw rescaled to spectral norm exactly `radius`."""
    while True:
        g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        nrm = operator_norm(g)
        if nrm > 0.0:
            return g * (radius / nrm)


def sample_ball(m: int, radius: float, seed) -> np.ndarray:
    """Deterministic m×m matrix of operator norm exactly `radius` ∈ (0, 1).

    Gaussian draw followed by exact rescaling, so the boundary sphere of any
    requested radius is reachable (no rejection).
    """
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidInputError(f"level must be a positive integer, got {m!r}")
    radius = float(radius)
    if not 0.0 < radius < 1.0:
        raise InvalidInputError(f"radius must lie in (0, 1), got {radius}")
    return _random_ball(derive_rng(seed), int(m), radius)


def project_ball(a, r: float) -> np.ndarray:
    """Clip singular values at r; points already inside the ball are fixed."""
    m = as_matrix(a)
    r = float(r)
    if not r > 0.0:
        raise InvalidInputError(f"projection radius must be positive, got {r}")
    if m.size == 0:
        return m
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s[0] <= r:
        return m
    return (u * np.minimum(s, r)) @ vh
