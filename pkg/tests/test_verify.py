import json
import math

import pytest

from fconc import (
    CheckResult,
    EvalConfig,
    QuadratureError,
    check_kappa_monotone,
    check_limit,
    check_monotone_b,
    check_recurrence,
    reg_inc_beta,
    run_suite,
    quad_inc_beta,
)
from fconc.verify import check_oracle_agreement

from conftest import seeded_triples


class TestQuadIncBeta:
    def test_uniform_cdf(self):
        assert quad_inc_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_singular_endpoint(self):
        closed = (2.0 * math.sqrt(0.3) - (2.0 / 3.0) * 0.3 ** 1.5) * 0.75
        assert quad_inc_beta(0.3, 0.5, 2.0) == pytest.approx(closed, abs=1e-10)

    def test_reference_table_point(self):
        # threshold(0.5, 1.5, kappa=16) = 8/8.5 feeds the (1, 3) row
        v = quad_inc_beta(8.0 / 8.5, 0.5, 1.5)
        assert v == pytest.approx(0.993835, abs=5e-6)
        assert v == pytest.approx(reg_inc_beta(8.0 / 8.5, 0.5, 1.5), abs=1e-9)

    def test_endpoints(self):
        assert quad_inc_beta(0.0, 1.0, 2.0) == 0.0
        assert quad_inc_beta(1.0, 1.0, 2.0) == 1.0

    def test_sharp_peak_large_parameters(self):
        v = quad_inc_beta(0.5, 800.0, 800.0)
        assert v == pytest.approx(reg_inc_beta(0.5, 800.0, 800.0), abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            quad_inc_beta(-0.2, 1.0, 1.0)
        with pytest.raises(ValueError):
            quad_inc_beta(0.5, 0.3, 1.0)

    def test_refinement_cap_error(self):
        cfg = EvalConfig(quad_tolerance=1e-12, quad_max_level=5)
        with pytest.raises(QuadratureError) as err:
            quad_inc_beta(0.5, 1500.0, 1500.0, cfg)
        assert err.value.iterations == 5


class TestCheckRecurrence:
    def test_exact_arithmetic_point(self):
        # I_{1/2}(1,2) = 0.75, I_{1/2}(1,1) = 0.5, correction = 0.25
        r = check_recurrence([(0.5, 1.0, 1.0)])
        assert r.passed and r.max_residual <= 1e-14

    def test_x_zero_vanishes(self):
        r = check_recurrence([(0.0, 2.0, 3.0)])
        assert r.passed and r.max_residual == 0.0

    def test_large_sample_passes(self):
        r = check_recurrence(seeded_triples(31, 1000, 0.5, 500.0))
        assert r.passed
        assert r.max_residual <= 1e-10
        assert r.samples == 1000

    def test_injected_fault_fails_with_name(self):
        r = check_recurrence(seeded_triples(31, 50, 0.5, 500.0), tol=1e-20)
        assert not r.passed
        assert r.name == "recurrence-identity"


class TestCheckMonotoneB:
    def test_kappa_one_strict_decrease(self):
        r = check_monotone_b(1.0, [2], range(3, 201))
        assert r.passed
        assert r.max_residual < -1e-14

    def test_kappa_half_strict_decrease(self):
        r = check_monotone_b(0.5, [1], range(3, 201))
        assert r.passed

    def test_kappa_above_one_observational(self):
        r = check_monotone_b(1.5, [1], range(3, 60))
        assert r.passed
        assert "observational" in r.name

    def test_bad_range_rejected(self):
        with pytest.raises(ValueError):
            check_monotone_b(1.0, [1], [3, 5, 7])


class TestCheckLimit:
    def test_acceptance_parameters(self):
        r = check_limit((0.5, 1.0, 5.0), (0.5, 1.0), [2.0 ** j for j in range(1, 14)])
        assert r.passed
        assert r.max_residual <= 1e-3

    def test_closed_form_cross_check(self):
        # a = 1: I via 1-(1-q)^b against 1 - exp(-kappa)
        b = 2.0 ** 13
        q = 1.0 / (1.0 + b - 1.0)
        closed = -math.expm1(b * math.log1p(-q))
        assert abs(closed - (1.0 - math.exp(-1.0))) <= 1e-3
        assert reg_inc_beta(q, 1.0, b) == pytest.approx(closed, abs=1e-12)

    def test_bad_ladder_rejected(self):
        with pytest.raises(ValueError):
            check_limit((1.0,), (1.0,), [4.0, 2.0])


class TestCheckKappaMonotone:
    def test_reference_ladder(self):
        from fconc import FParams, prob_leq_kappa_mean

        r = check_kappa_monotone([(1, 3)], (1.0, 2.0, 4.0, 8.0, 16.0))
        assert r.passed
        assert prob_leq_kappa_mean(FParams(1, 3), 16.0) == pytest.approx(0.993835, abs=5e-6)

    def test_second_reference_pair(self):
        r = check_kappa_monotone([(2, 1999)], (1.0, 1.5))
        assert r.passed

    def test_singleton_vacuous(self):
        r = check_kappa_monotone([(1, 4)], (6.0,))
        assert r.passed
        assert r.samples == 0

    def test_bad_ladder_rejected(self):
        with pytest.raises(ValueError):
            check_kappa_monotone([(1, 4)], (2.0, 1.0))


class TestOracleAgreement:
    def test_sampled_agreement(self):
        r = check_oracle_agreement(seeded_triples(5, 60, 0.5, 2000.0))
        assert r.passed
        assert r.max_residual <= 1e-9


class TestReportAndSuite:
    def test_residuals_must_be_finite(self):
        with pytest.raises(ValueError):
            CheckResult(name="x", samples=1, max_residual=math.nan, passed=True)

    def test_quick_suite_passes(self):
        rep = run_suite("quick")
        assert rep.overall
        assert rep.first_failure() is None
        assert rep.seed == 1729
        names = [c.name for c in rep.checks]
        assert len(names) == len(set(names))  # checks keyed by name

    def test_suite_deterministic(self):
        d1 = run_suite("quick").to_dict()
        d2 = run_suite("quick").to_dict()
        assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)

    def test_report_serializable(self):
        rep = run_suite("quick")
        blob = json.dumps(rep.to_dict())
        parsed = json.loads(blob)
        assert parsed["overall"] is True
        assert {c["name"] for c in parsed["checks"]} == {c.name for c in rep.checks}

    def test_unknown_profile_rejected(self):
        with pytest.raises(ValueError):
            run_suite("exhaustive")
