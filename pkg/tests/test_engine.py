from __future__ import annotations

import json
import math
from fractions import Fraction as F

import numpy as np
import pytest

from shefferkit.engine import (
    DegreeOverflowError,
    PolynomialOnDual,
    binomial_check,
    build_basic,
    build_sheffer,
    evaluate,
    load_sequence,
    random_polynomial,
    save_sequence,
    sequence_from_json_dict,
    sequence_to_json_dict,
    sheffer_apply,
    sheffer_inverse_apply,
    theta_kappa,
    umbral_apply_direct,
)
from shefferkit.families import FamilySpec, log1p_series, make_family, neg_log1m_series
from shefferkit.series import (
    ScalarSeries,
    VectorSeries,
    monomial_basis,
    ps_exp,
    ps_mul,
)
from shefferkit.symtensor import SymCoeff, sym_contract, sym_norm, sym_product

from conftest import coeff_column_1d, poly_abs_diff, poly_scale, random_polynomial_sparse
from oracles import (
    charlier_coeffs,
    falling_coeffs,
    hermite_coeffs,
    laguerre_coeffs,
    random_unit_linear,
    rising_coeffs,
)


def falling_seq(order, exact=True):
    a = log1p_series(order, exact=exact)
    return build_basic(VectorSeries.from_scalar_1d(a), order)


def hermite_seq(order, exact=True):
    half = F(1, 2) if exact else 0.5 + 0.0j
    rho = ps_exp(ScalarSeries.from_terms(1, order, {(2,): half}))
    return build_sheffer(VectorSeries.identity(1, order, exact=exact), rho, order)


def monomial_1d(n, exact=True):
    return PolynomialOnDual.monomial(1, (n,), F(1) if exact else 1.0 + 0.0j)


class TestBuild:
    def test_identity_blocks(self):
        seq = build_basic(VectorSeries.identity(2, 4), 4)
        for n in range(5):
            for k in range(n + 1):
                mat = seq.block(k, n)
                if k == n:
                    assert np.array_equal(mat, np.eye(mat.shape[0], dtype=complex))
                else:
                    assert not np.any(mat)

    def test_falling_block_literals(self):
        seq = falling_seq(4)
        assert seq.block(2, 3)[0, 0] == -3
        assert seq.block(1, 3)[0, 0] == 2

    def test_falling_matches_product_oracle(self):
        seq = falling_seq(10)
        for n in range(11):
            assert coeff_column_1d(sheffer_apply(seq, monomial_1d(n)), n) == \
                [complex(c) for c in falling_coeffs(n)]

    def test_rising_matches_product_oracle(self):
        seq = build_basic(VectorSeries.from_scalar_1d(neg_log1m_series(8, exact=True)), 8)
        for n in range(9):
            assert coeff_column_1d(sheffer_apply(seq, monomial_1d(n)), n) == \
                [complex(c) for c in rising_coeffs(n)]

    def test_hermite_matches_recurrence(self):
        seq = hermite_seq(10)
        for n in range(11):
            got = sheffer_apply(seq, monomial_1d(n))
            assert [got.coefficient(k).coefficient((k,)) for k in range(n + 1)] == \
                hermite_coeffs(n)

    def test_hermite_s4_literal(self):
        got = sheffer_apply(hermite_seq(4), monomial_1d(4))
        assert coeff_column_1d(got, 4) == [3, 0, -6, 0, 1]

    def test_charlier_s2_literal(self):
        a, rho = make_family(FamilySpec("charlier", 1, 2), exact=True)
        got = sheffer_apply(build_sheffer(a, rho, 2), monomial_1d(2))
        assert coeff_column_1d(got, 2) == [1, -3, 1]

    def test_trivial_rho_collapses_to_basic(self):
        a = VectorSeries.from_scalar_1d(log1p_series(5, exact=True))
        with_one = build_sheffer(a, ScalarSeries.one(1, 5, exact=True), 5)
        basic = build_basic(a, 5)
        assert with_one.is_basic
        for key, mat in basic.blocks.items():
            assert np.array_equal(mat, with_one.blocks[key])

    def test_requires_unit_linear(self):
        a = ScalarSeries.from_terms(1, 3, {(1,): 2.0})
        with pytest.raises(ValueError):
            build_basic(VectorSeries.from_scalar_1d(a), 3)

    def test_requires_full_truncation_orders(self):
        a = VectorSeries.identity(1, 4)
        with pytest.raises(ValueError):
            build_basic(a, 6)
        short_rho = ps_exp(ScalarSeries.from_terms(1, 3, {(2,): 0.5 + 0.0j}))
        with pytest.raises(ValueError):
            build_sheffer(VectorSeries.identity(1, 6), short_rho, 6)

    def test_monicity_float_exact(self, rng):
        a = random_unit_linear(2, 5, rng)
        seq = build_basic(a, 5)
        for n in range(6):
            mat = seq.block(n, n)
            assert np.array_equal(mat, np.eye(mat.shape[0], dtype=complex))


class TestThetaKappa:
    def test_trivial_rho(self):
        a = VectorSeries.identity(1, 5, exact=True)
        thetas, kappas = theta_kappa(a, None, 5)
        assert thetas[0].coefficient((0,)) == 1
        assert all(t.is_zero for t in thetas[1:])
        assert all(k.is_zero for k in kappas[1:])

    def test_hermite_values(self):
        seq = hermite_seq(6)
        assert seq.theta[2].coefficient((2,)) == F(-1, 2)
        assert seq.kappa[2].coefficient((2,)) == F(1, 2)
        assert seq.theta[1].is_zero and seq.theta[3].is_zero
        assert seq.kappa[1].is_zero and seq.kappa[3].is_zero

    def test_convolution_identity(self):
        # theta and kappa are mutually reciprocal series: their symmetric
        # product convolution telescopes to the constant 1
        a, rho = make_family(FamilySpec("laguerre", 1, 8, k=2.0), exact=True)
        seq = build_sheffer(a, rho, 8)
        for n in range(9):
            acc = SymCoeff.zero(1, n)
            for j in range(n + 1):
                acc = acc + sym_product(seq.theta[j], seq.kappa[n - j])
            if n == 0:
                assert acc.coefficient((0,)) == 1
            else:
                assert acc.is_zero

    def test_convolution_identity_via_series(self):
        a, rho = make_family(FamilySpec("charlier", 2, 5))
        seq = build_sheffer(a, rho, 5)
        prod = ps_mul(seq.theta_series, seq.kappa_series)
        assert abs(prod.constant_term - 1) <= 1e-14
        assert all(abs(complex(c)) <= 1e-12
                   for mi, c in prod.terms.items() if mi.degree > 0)


class TestApply:
    def test_identity_sequence(self, rng):
        seq = build_basic(VectorSeries.identity(2, 5), 5)
        p = random_polynomial(2, 5, rng)
        assert poly_abs_diff(sheffer_apply(seq, p), p) == 0.0

    def test_falling_z4(self):
        got = sheffer_apply(falling_seq(4), monomial_1d(4))
        assert coeff_column_1d(got, 4) == [0, -6, 11, -6, 1]

    def test_hermite_z2(self):
        got = sheffer_apply(hermite_seq(2), monomial_1d(2))
        assert coeff_column_1d(got, 2) == [-1, 0, 1]

    def test_zero_polynomial_short_circuit(self):
        seq = falling_seq(4)
        out = sheffer_apply(seq, PolynomialOnDual.zero(1))
        assert out.is_zero

    def test_degree_overflow(self):
        seq = falling_seq(4)
        with pytest.raises(DegreeOverflowError):
            sheffer_apply(seq, monomial_1d(5))

    def test_triangularity_preserves_degree(self, rng):
        seq = build_basic(random_unit_linear(2, 6, rng), 6)
        for n in range(7):
            basis = monomial_basis(2, n)
            p = PolynomialOnDual.monomial(2, basis[0])
            q = sheffer_apply(seq, p)
            assert q.degree == n
            top = q.coefficient(n)
            assert top == p.coefficient(n)


class TestInverseApply:
    def test_falling_cubic(self):
        seq = falling_seq(3)
        p = PolynomialOnDual.from_coeffs(1, [
            SymCoeff.zero(1, 0),
            SymCoeff.from_coeffs(1, 1, {(1,): F(2)}),
            SymCoeff.from_coeffs(1, 2, {(2,): F(-3)}),
            SymCoeff.from_coeffs(1, 3, {(3,): F(1)}),
        ])
        got = sheffer_inverse_apply(seq, p)
        assert coeff_column_1d(got, 3) == [0, 0, 0, 1]

    def test_hermite_quadratic(self):
        seq = hermite_seq(2)
        p = PolynomialOnDual.from_coeffs(1, [
            SymCoeff.from_coeffs(1, 0, {(0,): F(-1)}),
            SymCoeff.zero(1, 1),
            SymCoeff.from_coeffs(1, 2, {(2,): F(1)}),
        ])
        got = sheffer_inverse_apply(seq, p)
        assert coeff_column_1d(got, 2) == [0, 0, 1]

    def test_roundtrip_random_families(self, rng):
        catalog = [
            build_sheffer(*make_family(FamilySpec("falling", 1, 8)), 8),
            build_sheffer(*make_family(FamilySpec("hermite", 1, 8)), 8),
            build_sheffer(*make_family(FamilySpec("charlier", 1, 8)), 8),
            build_sheffer(*make_family(FamilySpec("laguerre", 1, 8, k=2.0)), 8),
            build_sheffer(*make_family(FamilySpec("charlier", 2, 6)), 6),
        ]
        for seq in catalog:
            for _ in range(5):
                p = random_polynomial(seq.dim, seq.max_degree, rng)
                mid = sheffer_apply(seq, p)
                back = sheffer_inverse_apply(seq, mid)
                scale = max(1.0, poly_scale(p), poly_scale(mid))
                assert poly_abs_diff(back, p) / scale <= 1e-9

    def test_roundtrip_exact_is_identity(self, rng):
        seq = falling_seq(8)
        p = PolynomialOnDual.from_coeffs(1, [
            SymCoeff.from_coeffs(1, n, {(n,): F(int(rng.integers(-5, 6)), 3)})
            for n in range(9)])
        back = sheffer_inverse_apply(seq, sheffer_apply(seq, p))
        for n in range(9):
            assert back.coefficient(n) == p.coefficient(n)


class TestCombinatorialPath:
    def test_identity_map(self, rng):
        a = VectorSeries.identity(2, 4)
        p = random_polynomial(2, 4, rng)
        assert poly_abs_diff(umbral_apply_direct(a, p), p) <= 1e-14

    def test_falling_agrees_with_blocks(self, rng):
        a = VectorSeries.from_scalar_1d(log1p_series(6))
        seq = build_basic(a, 6)
        for _ in range(5):
            p = random_polynomial(1, 6, rng)
            assert poly_abs_diff(sheffer_apply(seq, p),
                                 umbral_apply_direct(a, p)) <= 1e-10

    def test_random_d2_agrees(self, rng):
        a = random_unit_linear(2, 4, rng, decay=2.0)
        seq = build_basic(a, 4)
        for _ in range(5):
            p = random_polynomial(2, 4, rng)
            assert poly_abs_diff(sheffer_apply(seq, p),
                                 umbral_apply_direct(a, p)) <= 1e-10

    def test_budget_guard(self, rng):
        a = random_unit_linear(3, 3, rng)
        with pytest.raises(ValueError):
            umbral_apply_direct(a, random_polynomial(3, 3, rng))


class TestBinomial:
    def test_identity_sequence(self):
        # the binomial theorem itself; float evaluation order leaves eps dust
        seq = build_basic(VectorSeries.identity(2, 5), 5)
        rep = binomial_check(seq, trials=10, rng=np.random.default_rng(3))
        assert rep.max_deviation <= 1e-13

    def test_falling_d1(self):
        seq = falling_seq(8, exact=False)
        rep = binomial_check(seq, trials=20, rng=np.random.default_rng(4))
        assert rep.max_deviation <= 1e-10

    def test_random_basic_d2(self, rng):
        seq = build_basic(random_unit_linear(2, 6, rng, decay=2.0), 6)
        rep = binomial_check(seq, trials=15, rng=np.random.default_rng(5))
        assert rep.max_deviation <= 1e-9

    def test_rejects_sheffer_input(self):
        seq = hermite_seq(4, exact=False)
        with pytest.raises(ValueError):
            binomial_check(seq)


def theta_route_apply(basic, thetas, p):
    """Test-only route: build the Sheffer image from the basic blocks and the
    reciprocal coefficients through slot contraction."""
    dim, order = basic.dim, p.trimmed().degree
    out = [SymCoeff.zero(dim, k) for k in range(order + 1)]
    for n in range(order + 1):
        phi = p.coefficient(n)
        if phi.is_zero:
            continue
        for j in range(n + 1):
            if thetas[j].is_zero:
                continue
            reduced = sym_contract(thetas[j], phi)
            scale = math.factorial(n) / math.factorial(n - j)
            img = sheffer_apply(basic, PolynomialOnDual.from_coeffs(
                dim, [SymCoeff.zero(dim, t) for t in range(n - j)] + [reduced]))
            for k in range(n - j + 1):
                out[k] = out[k] + img.coefficient(k).scale(scale)
    return PolynomialOnDual.from_coeffs(dim, out)


class TestPathEquivalence:
    def test_theta_convolution_route(self, rng):
        for spec in (FamilySpec("charlier", 1, 6), FamilySpec("laguerre", 1, 6, k=2.0),
                     FamilySpec("charlier", 2, 4)):
            a, rho = make_family(spec)
            seq = build_sheffer(a, rho, spec.max_degree)
            basic = build_basic(a, spec.max_degree)
            for _ in range(3):
                p = random_polynomial(spec.dim, spec.max_degree, rng)
                direct = sheffer_apply(seq, p)
                via_theta = theta_route_apply(basic, seq.theta, p)
                scale = max(1.0, poly_scale(direct))
                assert poly_abs_diff(direct, via_theta) / scale <= 1e-9

    def test_kappa_reverse_route(self, rng):
        # the basic tensors expand in the Sheffer tensors through kappa
        a, rho = make_family(FamilySpec("charlier", 1, 6))
        seq = build_sheffer(a, rho, 6)
        basic = build_basic(a, 6)
        for _ in range(5):
            w = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1))]
            for n in range(7):
                lhs = basic.polynomial_tensor(n, w)
                rhs = SymCoeff.zero(1, n)
                for k in range(n + 1):
                    scale = math.factorial(n) / math.factorial(n - k)
                    rhs = rhs + sym_product(seq.kappa[k],
                                            seq.polynomial_tensor(n - k, w)).scale(scale)
                assert sym_norm(lhs - rhs) <= 1e-9 * max(1.0, sym_norm(lhs))


class TestGeneratingFunction:
    def test_reproduction_at_random_points(self, rng):
        a, rho = make_family(FamilySpec("laguerre", 1, 8, k=2.0))
        seq = build_sheffer(a, rho, 8)
        for _ in range(20):
            w = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1))]
            xi = [0.05 * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))]
            lhs = sum((1.0 / math.factorial(n)) * seq.polynomial_tensor(n, w).evaluate(xi)
                      for n in range(9))
            axi = seq.a.evaluate(xi)
            rhs = np.exp(w[0] * axi[0]) / seq.rho.evaluate(axi)
            assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


class TestEvaluate:
    def test_constant(self):
        p = PolynomialOnDual.from_coeffs(1, [SymCoeff.scalar(1, 1.0)])
        assert evaluate(p, [123.0]) == 1.0

    def test_square(self):
        assert evaluate(PolynomialOnDual.monomial(1, (2,)), [3.0]) == 9.0

    def test_falling_value(self):
        p = sheffer_apply(falling_seq(3, exact=False), monomial_1d(3, exact=False))
        assert abs(evaluate(p, [5.0]) - 60.0) <= 1e-10

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(PolynomialOnDual.monomial(2, (1, 0)), [1.0])


class TestSequenceFiles:
    def test_save_load_roundtrip(self, tmp_path):
        a, rho = make_family(FamilySpec("charlier", 1, 6))
        seq = build_sheffer(a, rho, 6)
        path = tmp_path / "seq.json"
        save_sequence(seq, path)
        loaded = load_sequence(path)
        for key, mat in seq.blocks.items():
            assert np.array_equal(mat, loaded.blocks[key])

    def test_checksum_detects_corruption(self, tmp_path):
        a, rho = make_family(FamilySpec("falling", 1, 4))
        seq = build_sheffer(a, rho, 4)
        doc = sequence_to_json_dict(seq)
        doc["blocks"]["1,3"]["sha256"] = "0" * 64
        with pytest.raises(ValueError):
            sequence_from_json_dict(doc)

    def test_stale_blocks_detected(self, tmp_path):
        a, rho = make_family(FamilySpec("falling", 1, 4))
        seq = build_sheffer(a, rho, 4)
        doc = sequence_to_json_dict(seq)
        other = build_sheffer(*make_family(FamilySpec("rising", 1, 4)), 4)
        doc["a"] = other.a.to_json_dict()
        with pytest.raises(ValueError):
            sequence_from_json_dict(doc)

    def test_polynomial_json_roundtrip(self, rng):
        p = random_polynomial_sparse(2, 4, rng)
        doc = json.loads(json.dumps(p.to_json_dict()))
        q = PolynomialOnDual.from_json_dict(doc)
        assert poly_abs_diff(p, q) == 0.0


class TestClassicalExactness:
    def test_charlier_oracle_exact(self):
        a, rho = make_family(FamilySpec("charlier", 1, 8), exact=True)
        seq = build_sheffer(a, rho, 8)
        for n in range(9):
            got = sheffer_apply(seq, monomial_1d(n))
            assert [got.coefficient(k).coefficient((k,)) for k in range(n + 1)] == \
                charlier_coeffs(n)

    @pytest.mark.parametrize("k", [-1, 0, 2])
    def test_laguerre_oracle_exact(self, k):
        a, rho = make_family(FamilySpec("laguerre", 1, 8, k=k), exact=True)
        seq = build_sheffer(a, rho, 8)
        for n in range(9):
            got = sheffer_apply(seq, monomial_1d(n))
            assert [got.coefficient(m).coefficient((m,)) for m in range(n + 1)] == \
                laguerre_coeffs(n, k)
