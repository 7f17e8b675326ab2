"""Tests for symbolic holomorphic functions, amplification, and Taylor data."""

import numpy as np
import pytest

from cbnorm_lab import matcore
from cbnorm_lab.errors import ConfigurationError, DomainError, InvalidInputError
from cbnorm_lab.holofun import (
    Blaschke,
    Composite,
    GeometricPhi,
    MoebiusQuotient,
    PowerSeries,
    Product,
    Scale,
    Sum,
    amplify,
    analyticity_radius,
    evaluate,
    rescale_argument,
    taylor_coefficients,
)
from cbnorm_lab.opspace import OpSpaceElement, OpSpaceMatrix, space_min_linf

IDENTITY = PowerSeries([1.0])
SQUARE = PowerSeries([0.0, 1.0])
GEOMETRIC = MoebiusQuotient(IDENTITY, 0.5)
BLASCHKE = Blaschke(1.0, 1, [0.5])

MIN2 = space_min_linf(2)
PHI = np.array([0.4, 0.2], dtype=complex)
GEOM_PHI = GeometricPhi(MIN2, PHI, 0.6)
COMPOSITE = Composite(SQUARE, MIN2, PHI, 0.6)

DISK_ZOO = [
    IDENTITY,
    SQUARE,
    GEOMETRIC,
    BLASCHKE,
    Product(IDENTITY, GEOMETRIC),
    Sum(SQUARE, BLASCHKE),
    Scale(2.0 - 1.0j, GEOMETRIC),
]


def test_evaluate_linear():
    assert evaluate(PowerSeries([0.5]), 0.4) == 0.2


def test_evaluate_blaschke_zero_of_product():
    assert abs(evaluate(BLASCHKE, 0.5)) == 0.0


def test_evaluate_vanishes_at_origin():
    for f in DISK_ZOO:
        assert evaluate(f, 0.0) == 0.0
    zero = OpSpaceElement(MIN2, np.zeros(2, dtype=complex))
    assert evaluate(GEOM_PHI, zero) == 0.0
    assert evaluate(COMPOSITE, zero) == 0.0


def test_evaluate_rejects_boundary():
    with pytest.raises(DomainError):
        evaluate(IDENTITY, 1.0)
    with pytest.raises(DomainError):
        evaluate(GEOMETRIC, 1.0 + 0.2j)


def test_evaluate_matches_closed_forms():
    rng = np.random.default_rng(0)
    for _ in range(50):
        z = 0.9 * (rng.standard_normal() + 1j * rng.standard_normal()) / 2.0
        if abs(z) >= 1.0:
            continue
        assert abs(evaluate(GEOMETRIC, z) - z / (1 - 0.5 * z)) < 1e-14
        expected = z * (z - 0.5) / (1 - 0.5 * z)
        assert abs(evaluate(BLASCHKE, z) - expected) < 1e-14


def test_amplify_identity_returns_argument():
    x = matcore.sample_ball(3, 0.8, 1)
    assert np.array_equal(amplify(IDENTITY, x), x)


def test_amplify_square_diagonal():
    x = np.diag([0.5, 0.3]).astype(complex)
    assert np.allclose(amplify(SQUARE, x), np.diag([0.25, 0.09]), atol=0)


def test_amplify_square_entrywise_hand_check():
    x = 0.9 * np.ones((2, 2), dtype=complex) / 2.0
    out = amplify(SQUARE, x)
    assert np.allclose(out, np.full((2, 2), 0.45**2), atol=0)
    assert abs(matcore.operator_norm(out) - 2 * 0.45**2) < 1e-14


def test_amplify_rejects_boundary_matrix():
    with pytest.raises(DomainError):
        amplify(IDENTITY, np.eye(2))


def test_amplify_level1_matches_evaluate():
    rng = np.random.default_rng(1)
    for f in DISK_ZOO:
        z = 0.6 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        assert abs(amplify(f, np.array([[z]]))[0, 0] - evaluate(f, z)) < 1e-15
    x = OpSpaceElement(MIN2, np.array([0.5, -0.3j]))
    for f in (GEOM_PHI, COMPOSITE):
        assert abs(amplify(f, x.as_level1())[0, 0] - evaluate(f, x)) < 1e-15


def test_amplify_commutes_with_direct_sums_exactly():
    rng = np.random.default_rng(2)
    for f in DISK_ZOO:
        a = matcore._random_ball(rng, 2, 0.5)
        b = matcore._random_ball(rng, 3, 0.7)
        combined = amplify(f, matcore.direct_sum(a, b))
        expected = matcore.direct_sum(amplify(f, a), amplify(f, b))
        assert np.array_equal(combined, expected)


def test_amplify_space_direct_sum_exact():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((2, 2, 2)) + 1j * rng.standard_normal((2, 2, 2))
    x = OpSpaceMatrix(MIN2, 0.2 * g)
    padded_entries = np.zeros((3, 3, 2), dtype=complex)
    padded_entries[:2, :2] = x.entries
    padded = OpSpaceMatrix(MIN2, padded_entries)
    out = amplify(GEOM_PHI, padded)
    assert np.array_equal(out[:2, :2], amplify(GEOM_PHI, x))
    assert np.all(out[2:, :] == 0) and np.all(out[:, 2:] == 0)


def test_amplify_guard_catches_bad_certification():
    lying = GeometricPhi(MIN2, np.array([5.0, 0.0], dtype=complex), 0.5)
    x = OpSpaceElement(MIN2, np.array([0.9, 0.0])).as_level1()
    with pytest.raises(DomainError):
        amplify(lying, x)


def test_composite_requires_certification():
    with pytest.raises(ConfigurationError):
        Composite(SQUARE, MIN2, PHI, None)
    with pytest.raises(ConfigurationError):
        Composite(SQUARE, MIN2, PHI, 1.0)


def test_taylor_power_series_exact_copy():
    tc = taylor_coefficients(PowerSeries([0.0, 1.0]), 5)
    assert np.array_equal(tc.coeffs, np.array([0, 1, 0, 0, 0], dtype=complex))
    assert tc.tail_bound == 0.0


def test_taylor_geometric_series():
    tc = taylor_coefficients(GEOMETRIC, 20)
    expected = 0.5 ** np.arange(20)
    assert np.max(np.abs(tc.coeffs - expected)) < 1e-9
    true_tail = 0.5**20 / (1 - 0.5)
    assert tc.tail_bound is not None and tc.tail_bound >= true_tail


def test_taylor_blaschke_first_coefficient():
    # d/dz [z(z-0.5)/(1-0.5z)] at 0 equals -0.5.
    tc = taylor_coefficients(BLASCHKE, 4)
    assert abs(tc.coeffs[0] - (-0.5)) < 1e-9


def test_taylor_product_is_cauchy_convolution():
    f = PowerSeries([0.3, -0.2, 0.1j])
    g = GEOMETRIC
    k = 12
    cf = np.concatenate([[0.0], taylor_coefficients(f, k).coeffs])
    cg = np.concatenate([[0.0], taylor_coefficients(g, k).coeffs])
    conv = np.convolve(cf, cg)[1 : k + 1]
    tc = taylor_coefficients(Product(f, g), k)
    assert np.max(np.abs(tc.coeffs - conv)) < 1e-8


def test_taylor_tail_unknown_at_unit_radius():
    f = Product(PowerSeries([1.0], analytic_radius=1.0), GEOMETRIC)
    tc = taylor_coefficients(f, 8)
    assert tc.tail_bound is None
    expected = np.concatenate([[0.0], 0.5 ** np.arange(7)])
    assert np.max(np.abs(tc.coeffs - expected)) < 1e-9


def test_taylor_rejects_space_domain():
    with pytest.raises(InvalidInputError):
        taylor_coefficients(GEOM_PHI, 4)


def test_analyticity_radius():
    assert analyticity_radius(IDENTITY) == np.inf
    assert analyticity_radius(GEOMETRIC) == 2.0
    assert analyticity_radius(BLASCHKE) == 2.0
    assert analyticity_radius(Product(GEOMETRIC, MoebiusQuotient(IDENTITY, 0.8))) == 1.25


def test_rescale_argument_matches_substitution():
    rng = np.random.default_rng(4)
    t = 0.6
    for f in DISK_ZOO:
        g = rescale_argument(f, t)
        for _ in range(20):
            z = 0.95 * np.exp(1j * rng.uniform(0, 2 * np.pi)) * rng.uniform(0, 1)
            assert abs(evaluate(g, z) - evaluate(f, t * z)) < 1e-12


def test_scale_nodes_collapse():
    s = Scale(2.0, Scale(3.0, IDENTITY))
    assert s.c == 6.0
    assert isinstance(s.inner, PowerSeries)


def test_variant_validation():
    with pytest.raises(InvalidInputError):
        Blaschke(2.0, 1, [])
    with pytest.raises(InvalidInputError):
        Blaschke(1.0, 0, [])
    with pytest.raises(InvalidInputError):
        Blaschke(1.0, 1, [1.0])
    with pytest.raises(InvalidInputError):
        MoebiusQuotient(IDENTITY, 1.0)
    with pytest.raises(InvalidInputError):
        MoebiusQuotient(GEOM_PHI, 0.5)
    with pytest.raises(InvalidInputError):
        Product(IDENTITY, GEOM_PHI)
    with pytest.raises(InvalidInputError):
        PowerSeries([1.0], analytic_radius=0.5)
