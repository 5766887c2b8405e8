from __future__ import annotations

import json
from fractions import Fraction as F

import numpy as np
import pytest

from shefferkit.engine import binomial_check, build_sheffer
from shefferkit.families import (
    FamilySpec,
    lift_1d,
    log1p_series,
    make_family,
    neg_log1m_series,
    ratio_series,
)
from shefferkit.norms import quasi_holo_probe
from shefferkit.series import ScalarSeries, VectorSeries, ps_compose, ps_exp


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            FamilySpec("nosuch", 1, 4)

    def test_laguerre_parameter_floor(self):
        with pytest.raises(ValueError):
            FamilySpec("laguerre", 1, 4, k=-2.0)
        FamilySpec("laguerre", 1, 4, k=-1.0)

    def test_covariance_shape_and_pd(self):
        with pytest.raises(ValueError):
            FamilySpec("hermite", 2, 4, cov=((1.0,),))
        with pytest.raises(ValueError):
            FamilySpec("hermite", 2, 4, cov=((1.0, 2.0), (2.0, 1.0)))
        with pytest.raises(ValueError):
            FamilySpec("hermite", 2, 4, cov=((1.0, 0.5), (0.4, 1.0)))

    def test_weights_positive(self):
        with pytest.raises(ValueError):
            FamilySpec("falling", 2, 4, weights=(1.0, 0.0))
        with pytest.raises(ValueError):
            FamilySpec("falling", 2, 4, weights=(1.0,))

    def test_json_roundtrip(self):
        spec = FamilySpec("hermite", 2, 6, cov=((2.0, 0.5), (0.5, 1.0)),
                          weights=(1.0, 2.0))
        doc = json.loads(json.dumps(spec.to_json_dict()))
        assert FamilySpec.from_json_dict(doc) == spec
        spec2 = FamilySpec("laguerre", 1, 4, k=2.0)
        assert FamilySpec.from_json_dict(spec2.to_json_dict()) == spec2


class TestHermite:
    def test_rho_coefficients_1d(self):
        _, rho = make_family(FamilySpec("hermite", 1, 8), exact=True)
        assert rho.coefficient((2,)) == F(1, 2)
        assert rho.coefficient((4,)) == F(1, 8)
        assert rho.coefficient((6,)) == F(1, 48)
        assert rho.coefficient((1,)) == 0 and rho.coefficient((3,)) == 0

    def test_quadratic_form_with_covariance(self):
        cov = ((2.0, 1.0), (1.0, 2.0))
        _, rho = make_family(FamilySpec("hermite", 2, 4, cov=cov))
        # degree-2 part of exp is the quadratic form itself
        assert abs(complex(rho.coefficient((2, 0))) - 1.0) <= 1e-14
        assert abs(complex(rho.coefficient((1, 1))) - 1.0) <= 1e-14
        assert abs(complex(rho.coefficient((0, 2))) - 1.0) <= 1e-14

    def test_even_structure_matches_symmetrized_powers(self):
        # rho^(2k) = Delta^{(.)k} / (k! 2^k) with Delta the quadratic kernel
        from shefferkit.symtensor import SymCoeff, sym_product
        cov = ((2.0, 0.5), (0.5, 1.0))
        _, rho = make_family(FamilySpec("hermite", 2, 6, cov=cov))
        delta = SymCoeff.from_coeffs(2, 2, {
            (2, 0): 2.0, (1, 1): 1.0, (0, 2): 1.0})
        power = delta
        import math
        for k in (1, 2, 3):
            if k > 1:
                power = sym_product(power, delta)
            part = rho.degree_part(2 * k)
            scale = 1.0 / (math.factorial(k) * 2.0 ** k)
            for exps, c in part.items():
                assert abs(complex(c) - scale * complex(power.coefficient(exps))) <= 1e-12

    def test_appell_shape(self):
        a, _ = make_family(FamilySpec("hermite", 2, 5))
        assert a == VectorSeries.identity(2, 5)


class TestLift:
    def test_identity_pair(self):
        u = ScalarSeries.variable(1, 5, 0, exact=True)
        a, rho = lift_1d(u, None, 3)
        assert a == VectorSeries.identity(3, 5, exact=True)
        assert rho.constant_term == 1 and len(rho.terms) == 1

    def test_falling_d2_components(self):
        a, rho = make_family(FamilySpec("falling", 2, 5), exact=True)
        lg = log1p_series(5, exact=True)
        for i, comp in enumerate(a.components):
            for k in range(1, 6):
                exps = [0, 0]
                exps[i] = k
                assert comp.coefficient(tuple(exps)) == lg.coefficient((k,))
        assert len(rho.terms) == 1 and rho.constant_term == 1

    def test_charlier_divisor_in_source_variable(self):
        # the lift is arranged so rho(A(xi)) = exp(sum_i xi_i) exactly
        a, rho = make_family(FamilySpec("charlier", 2, 6), exact=True)
        composed = ps_compose(rho.truncate(6), a)
        expected = ps_exp(ScalarSeries.from_terms(2, 6, {(1, 0): F(1), (0, 1): F(1)}))
        assert composed == expected

    def test_laguerre_divisor(self):
        a, rho = make_family(FamilySpec("laguerre", 1, 6, k=2.0), exact=True)
        composed = ps_compose(rho.truncate(6), a)
        # (1+u)^{k+1} = exp((k+1) log(1+u)) at k = 2
        expected = ps_exp(log1p_series(6, exact=True).scale(3))
        assert composed == expected

    def test_laguerre_km1_is_basic(self):
        _, rho = make_family(FamilySpec("laguerre", 1, 6, k=-1.0), exact=True)
        assert len(rho.terms) == 1 and rho.constant_term == 1

    def test_weighted_charlier_divisor(self):
        a, rho = make_family(FamilySpec("charlier", 2, 5, weights=(1.0, 3.0)),
                             exact=True)
        composed = ps_compose(rho.truncate(5), a)
        expected = ps_exp(ScalarSeries.from_terms(2, 5, {(1, 0): F(1), (0, 1): F(3)}))
        assert composed == expected

    def test_d1_lift_reproduces_direct_family(self):
        # blockwise identity between the lifted family at d = 1, unit weight,
        # and the same family assembled by hand
        for kind, kpar in (("charlier", 0.0), ("laguerre", 2.0)):
            a, rho = make_family(FamilySpec(kind, 1, 6, k=kpar), exact=True)
            seq = build_sheffer(a, rho, 6)
            if kind == "charlier":
                base = log1p_series(6, exact=True)
                c = ScalarSeries.from_terms(1, 6, {(1,): F(1)})
            else:
                base = ratio_series(6, exact=True)
                c = log1p_series(6, exact=True).scale(3)
            a2, rho2 = lift_1d(base, c, 1, [F(1)])
            seq2 = build_sheffer(a2, rho2, 6)
            for key, mat in seq.blocks.items():
                assert np.array_equal(mat, seq2.blocks[key])

    def test_lifted_basic_passes_binomial(self):
        for kind in ("falling", "rising"):
            a, rho = make_family(FamilySpec(kind, 2, 6))
            seq = build_sheffer(a, rho, 6)
            assert seq.is_basic
            rep = binomial_check(seq, trials=10, rng=np.random.default_rng(8))
            assert rep.max_deviation <= 1e-9

    def test_catalog_quasi_holomorphic(self):
        for kind in ("falling", "rising", "charlier", "laguerre"):
            a, _ = make_family(FamilySpec(kind, 1, 10))
            rep = quasi_holo_probe(a)
            assert rep.forward_envelope <= 1.0 + 1e-9
            assert np.isfinite(rep.inverse_envelope)

    def test_lift_validation(self):
        bad = ScalarSeries.from_terms(1, 4, {(1,): 2.0})
        with pytest.raises(ValueError):
            lift_1d(bad, None, 2)
        u = ScalarSeries.variable(1, 4, 0)
        with pytest.raises(ValueError):
            lift_1d(u, None, 2, weights=[1.0, -1.0])
        with pytest.raises(ValueError):
            lift_1d(u, None, 2, weights=[1.0])


class TestBaseSeries:
    def test_log1p(self):
        s = log1p_series(5, exact=True)
        assert [s.coefficient((k,)) for k in range(1, 6)] == [
            F(1), F(-1, 2), F(1, 3), F(-1, 4), F(1, 5)]

    def test_neg_log1m(self):
        s = neg_log1m_series(4, exact=True)
        assert [s.coefficient((k,)) for k in range(1, 5)] == [
            F(1), F(1, 2), F(1, 3), F(1, 4)]

    def test_ratio(self):
        s = ratio_series(5, exact=True)
        assert [s.coefficient((k,)) for k in range(1, 6)] == [1, -1, 1, -1, 1]

    def test_rising_is_mirror_of_falling(self):
        # -log(1-u) and log(1+u) differ by alternating signs
        lg = log1p_series(6, exact=True)
        mg = neg_log1m_series(6, exact=True)
        for k in range(1, 7):
            assert mg.coefficient((k,)) == abs(lg.coefficient((k,)))


class TestCustomRejected:
    def test_make_family_custom_raises(self):
        with pytest.raises(ValueError):
            make_family(FamilySpec("custom", 1, 4))
