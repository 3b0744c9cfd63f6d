import math

import numpy as np
import pytest

import oracle
from dxprobe.errors import DuplicateParameterNode, MissingSeverityClass
from dxprobe.inference import posterior
from dxprobe.learning import GridAxis
from dxprobe.network import ConditionalTable, Variable, build_network
from dxprobe.reports import (
    OpenProbeResponse,
    ReportParams,
    augment_with_reports,
    open_probe_evidence,
    open_probe_evidence_for_network,
    report_node_id,
)
from dxprobe.severity import (
    BUILTIN_LINKS,
    DEMO_CLOSED_FORM,
    MINOR_REPORTABILITY,
    QUADRATIC,
    SeverityLink,
    augment_with_severity,
    build_severity_demo,
    midpoint_axis,
    severity_posterior_demo,
    validate_link,
)

SQRT = SeverityLink("sqrt", math.sqrt)
IDENTITY = SeverityLink("identity", lambda x: x)
SQUARE = SeverityLink("square", lambda x: x * x)


# --- validate_link ---------------------------------------------------------------


def test_quadratic_link_passes_all_properties():
    report = validate_link(QUADRATIC)
    assert report.all_passed


def test_identity_link_fails_only_increase_above_identity():
    report = validate_link(IDENTITY)
    assert not report.increasing_above_identity.passed
    assert report.maps_into_unit_interval.passed
    assert report.nonincreasing_ratio.passed
    assert 0.0 < report.increasing_above_identity.violation_at < 1.0


def test_square_link_fails_properties_one_and_three():
    report = validate_link(SQUARE)
    assert not report.increasing_above_identity.passed
    assert not report.nonincreasing_ratio.passed
    assert report.maps_into_unit_interval.passed


def test_sqrt_link_is_valid():
    assert validate_link(SQRT).all_passed


def test_out_of_unit_link_fails_property_two():
    report = validate_link(SeverityLink("bad", lambda x: 1.5 * x))
    assert not report.maps_into_unit_interval.passed


# --- augmentation ------------------------------------------------------------------


def test_demo_network_structure():
    net, params = build_severity_demo(grid_points=5)
    assert len(net) == 7  # 2 diseases, 2 symptoms, 2 reports, minor grid node
    assert net.parents(report_node_id("initial", "rash")) == ("rash", MINOR_REPORTABILITY)
    assert net.card(MINOR_REPORTABILITY) == 5


def test_missing_severity_class_rejected(net_a):
    params = [ReportParams("rash", 0.9, 5.0, "initial")]  # class "none"
    with pytest.raises(MissingSeverityClass):
        augment_with_severity(net_a, params, midpoint_axis(5))


def test_duplicate_parameter_node_rejected(net_a):
    params = [ReportParams("rash", 0.9, 5.0, "initial", "minor")]
    aug = augment_with_severity(net_a, params, midpoint_axis(5))
    with pytest.raises(DuplicateParameterNode):
        augment_with_severity(aug, params, midpoint_axis(5))


def test_all_minor_single_point_reduces_to_fixed_params(net_a):
    # Degenerate one-point grid with identity behaviour: exactly the fixed
    # report-layer network.
    point = GridAxis((0.7,), (1.0,))
    params = [
        ReportParams("rash", 0.7, 5.0, "initial", "minor"),
        ReportParams("headache", 0.7, 5.0, "initial", "minor"),
    ]
    sev = augment_with_severity(net_a, params, point, IDENTITY)
    fixed = augment_with_reports(net_a, params, "initial")
    assert set(sev.variable_ids) == set(fixed.variable_ids)
    ev = open_probe_evidence(OpenProbeResponse("initial", {"rash": "present"}), params)
    for q in ("poison_ivy", "migraine", "headache"):
        np.testing.assert_allclose(
            posterior(sev, q, ev).probabilities,
            posterior(fixed, q, ev).probabilities,
            atol=1e-10,
        )


def test_severity_network_matches_enumeration():
    net, _ = build_severity_demo(grid_points=7)
    ev = open_probe_evidence_for_network(net, OpenProbeResponse("initial", {"rash": "present"}))
    for q in ("rash_disease", "heart_attack", "chest_pain"):
        np.testing.assert_allclose(
            posterior(net, q, ev).probabilities,
            oracle.enum_posterior(net, q, ev),
            atol=1e-12,
        )


# --- demo numbers ---------------------------------------------------------------------


def test_demo_reproduces_published_posteriors():
    net, _ = build_severity_demo(grid_points=1000)
    _, heart = severity_posterior_demo(net, OpenProbeResponse("initial", {"rash": "present"}))
    assert heart.p("present") == pytest.approx(
        float(oracle.severity_minor_reported_posterior()), abs=1e-5
    )
    assert heart.p("present") == pytest.approx(0.00168, abs=1e-5)
    rash, _ = severity_posterior_demo(net, OpenProbeResponse("initial", {"chest_pain": "present"}))
    assert rash.p("present") == pytest.approx(
        float(oracle.severity_major_reported_posterior()), abs=1e-5
    )
    assert rash.p("present") == pytest.approx(0.00377, abs=1e-5)


def test_demo_convergence_is_monotone():
    closed = float(oracle.severity_minor_reported_posterior())
    errors = []
    for n in (10, 50, 200, 1000):
        net, _ = build_severity_demo(grid_points=n)
        _, heart = severity_posterior_demo(net, OpenProbeResponse("initial", {"rash": "present"}))
        errors.append(abs(heart.p("present") - closed))
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-5


def test_no_reports_drop_both_posteriors_symmetrically():
    net, _ = build_severity_demo(grid_points=200, link=IDENTITY)
    rash, heart = severity_posterior_demo(net, OpenProbeResponse("initial", {}))
    assert rash.p("present") < 0.01
    assert heart.p("present") < 0.01
    assert rash.p("present") == pytest.approx(heart.p("present"), abs=1e-12)


# --- asymmetry -------------------------------------------------------------------------


@pytest.mark.parametrize("link", [QUADRATIC, SQRT])
@pytest.mark.parametrize("grid_points", [3, 10, 101])
def test_minor_report_penalizes_major_more(link, grid_points):
    net, _ = build_severity_demo(grid_points=grid_points, link=link)
    _, heart = severity_posterior_demo(net, OpenProbeResponse("initial", {"rash": "present"}))
    rash, _ = severity_posterior_demo(net, OpenProbeResponse("initial", {"chest_pain": "present"}))
    assert heart.p("present") < rash.p("present")


def test_asymmetry_with_finite_bias():
    variables = [
        Variable("minor_disease", ("present", "absent"), kind="disorder"),
        Variable("major_disease", ("present", "absent"), kind="disorder"),
        Variable("itch", ("present", "absent"), kind="symptom"),
        Variable("crushing_pain", ("present", "absent"), kind="symptom"),
    ]
    deterministic = np.array([1.0, 0.0, 0.0, 1.0])
    tables = [
        ConditionalTable("minor_disease", (), np.array([0.01, 0.99])),
        ConditionalTable("major_disease", (), np.array([0.01, 0.99])),
        ConditionalTable("itch", ("minor_disease",), deterministic),
        ConditionalTable("crushing_pain", ("major_disease",), deterministic),
    ]
    base = build_network(variables, tables)
    params = [
        ReportParams("itch", 0.5, 5.0, "initial", "minor"),
        ReportParams("crushing_pain", 0.5, 5.0, "initial", "major"),
    ]
    net = augment_with_severity(base, params, midpoint_axis(101), QUADRATIC)
    ev_minor = open_probe_evidence_for_network(net, OpenProbeResponse("initial", {"itch": "present"}))
    ev_major = open_probe_evidence_for_network(
        net, OpenProbeResponse("initial", {"crushing_pain": "present"})
    )
    major_given_minor = posterior(net, "major_disease", ev_minor).p("present")
    minor_given_major = posterior(net, "minor_disease", ev_major).p("present")
    assert major_given_minor < minor_given_major


def test_builtin_link_registry():
    assert BUILTIN_LINKS["quadratic"] is QUADRATIC
    assert QUADRATIC(0.5) == pytest.approx(0.75)
