"""Coupling major- and minor-symptom reportabilities through a link function.

Minor symptoms draw their reportability from a discretized prior; major
symptoms use ``h(reportability)`` where h is strictly increasing with
h(p) > p and a nonincreasing ratio h(p)/p. The effect: once a patient has
volunteered a minor complaint, staying silent about a major one argues
strongly against that major symptom being present, while the converse
inference is much weaker.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DuplicateParameterNode, DuplicateReportNode, MissingSeverityClass, UnknownVariable
from .learning import GridAxis
from .network import ConditionalTable, Network, Posterior, Variable, build_network
from .reports import (
    ReportParams,
    absent_state_index,
    report_columns,
    report_node_id,
)

MINOR_REPORTABILITY = "minor_reportability"


@dataclass(frozen=True)
class SeverityLink:
    """Named map from minor-symptom reportability to major-symptom reportability."""

    name: str
    fn: Callable[[float], float]

    def __call__(self, p: float) -> float:
        return self.fn(p)


def _quadratic(x: float) -> float:
    return 2.0 * x - x * x


QUADRATIC = SeverityLink("quadratic", _quadratic)

BUILTIN_LINKS: dict[str, SeverityLink] = {"quadratic": QUADRATIC}


@dataclass(frozen=True)
class PropertyCheck:
    passed: bool
    violation_at: float | None = None


@dataclass(frozen=True)
class LinkValidation:
    """Numeric audit of the three link-function properties."""

    increasing_above_identity: PropertyCheck
    maps_into_unit_interval: PropertyCheck
    nonincreasing_ratio: PropertyCheck

    @property
    def all_passed(self) -> bool:
        return (
            self.increasing_above_identity.passed
            and self.maps_into_unit_interval.passed
            and self.nonincreasing_ratio.passed
        )


def validate_link(link: SeverityLink, n_points: int = 10_000) -> LinkValidation:
    """Check the three properties on a dense grid plus the endpoints.

    Failures are data, not errors: each property reports pass/fail with the
    first violating point.
    """
    ps = np.linspace(0.0, 1.0, n_points + 2)
    hs = np.array([link(float(p)) for p in ps])
    interior = slice(1, -1)

    def first_bad(mask, points) -> PropertyCheck:
        bad = np.flatnonzero(mask)
        if bad.size:
            return PropertyCheck(False, float(points[bad[0]]))
        return PropertyCheck(True)

    # 1: strictly increasing on (0,1) and h(p) > p there.
    not_increasing = np.diff(hs[interior]) <= 0.0
    not_above = hs[interior] <= ps[interior]
    if not_increasing.any() or not_above.any():
        candidates = []
        if not_increasing.any():
            candidates.append(ps[interior][np.flatnonzero(not_increasing)[0]])
        if not_above.any():
            candidates.append(ps[interior][np.flatnonzero(not_above)[0]])
        prop1 = PropertyCheck(False, float(min(candidates)))
    else:
        prop1 = PropertyCheck(True)

    prop2 = first_bad((hs < 0.0) | (hs > 1.0), ps)

    ratios = hs[interior] / ps[interior]
    prop3 = first_bad(np.diff(ratios) > 1e-12, ps[interior][1:])

    return LinkValidation(prop1, prop2, prop3)


def midpoint_axis(n_points: int) -> GridAxis:
    """Uniform discretization of (0,1): n midpoints with equal weight.

    The Riemann sums over this axis converge O(n^-2) to integrals against a
    uniform density.
    """
    values = tuple((i + 0.5) / n_points for i in range(n_points))
    return GridAxis(values, tuple(1.0 / n_points for _ in range(n_points)))


def augment_with_severity(net: Network, params_list: Iterable[ReportParams],
                          minor_axis: GridAxis, link: SeverityLink = QUADRATIC,
                          question_id: str = "initial") -> Network:
    """Add the minor-reportability node and class-linked report nodes.

    Minor symptoms report with the grid value itself, major symptoms with
    ``link(value)``; each symptom keeps its own (possibly infinite) bias.
    A single-point axis folds into the CPTs instead of becoming a node.
    """
    params_list = list(params_list)
    for params in params_list:
        if params.severity_class not in ("major", "minor"):
            raise MissingSeverityClass(
                f"symptom {params.symptom_id!r} needs severity class major or minor, "
                f"got {params.severity_class!r}"
            )
        if params.symptom_id not in net:
            raise UnknownVariable(f"unknown symptom {params.symptom_id!r}")
    if MINOR_REPORTABILITY in net:
        raise DuplicateParameterNode(f"parameter node {MINOR_REPORTABILITY!r} already present")

    variables = list(net.variables)
    tables = list(net.tables.values())
    seen = set(net.variable_ids)
    gridded = len(minor_axis) > 1
    if gridded:
        variables.append(Variable(MINOR_REPORTABILITY, minor_axis.state_labels, kind="parameter"))
        tables.append(ConditionalTable(MINOR_REPORTABILITY, (), np.asarray(minor_axis.priors)))

    for params in params_list:
        node_id = report_node_id(question_id, params.symptom_id)
        if node_id in seen:
            raise DuplicateReportNode(f"report node {node_id!r} already exists")
        seen.add(node_id)
        symptom = net.variable(params.symptom_id)
        absent_idx = absent_state_index(symptom)
        block = np.empty((symptom.card, len(minor_axis), 2))
        for i, p in enumerate(minor_axis.values):
            eff = p if params.severity_class == "minor" else link(p)
            block[:, i, :] = report_columns(eff, params.bias, symptom.card, absent_idx)
        variables.append(Variable(node_id, ("true", "false"), kind="report"))
        if gridded:
            tables.append(
                ConditionalTable(node_id, (params.symptom_id, MINOR_REPORTABILITY),
                                 block.reshape(-1))
            )
        else:
            tables.append(
                ConditionalTable(node_id, (params.symptom_id,), block[:, 0, :].reshape(-1))
            )
    return build_network(variables, tables)


# --- two-disease demonstration fixture -------------------------------------------

DEMO_QUESTION = "initial"

# Exact posteriors of the demonstration network in the infinite-grid limit,
# from closed-form polynomial integrals over the uniform reportability prior:
#   minor reported:  0.01*I[p(1-p)^2] / (0.01*I[p(1-p)^2] + 0.99*I[p])          = 1/595
#   major reported:  0.01*I[(2p-p^2)(1-p)] / (0.01*I[same] + 0.99*I[2p-p^2])    = 1/265
# where I[f] integrates f over [0,1].
DEMO_CLOSED_FORM = {
    "minor_reported_major_posterior": 1.0 / 595.0,
    "major_reported_minor_posterior": 1.0 / 265.0,
}

DEMO_DISORDERS = ("rash_disease", "heart_attack")
DEMO_MINOR_SYMPTOM = "rash"
DEMO_MAJOR_SYMPTOM = "chest_pain"


def build_severity_demo(grid_points: int = 1000, link: SeverityLink = QUADRATIC,
                        prior: float = 0.01) -> tuple[Network, list[ReportParams]]:
    """Two diseases with deterministic symptoms: one minor, one major.

    Absent symptoms are never volunteered (infinite bias), positive reports
    are taken at face value; minor reportability is uniform on (0,1) via midpoints.
    """
    variables = [
        Variable("rash_disease", ("present", "absent"), kind="disorder"),
        Variable("heart_attack", ("present", "absent"), kind="disorder"),
        Variable(DEMO_MINOR_SYMPTOM, ("present", "absent"), kind="symptom"),
        Variable(DEMO_MAJOR_SYMPTOM, ("present", "absent"), kind="symptom"),
    ]
    deterministic = np.array([1.0, 0.0, 0.0, 1.0])
    tables = [
        ConditionalTable("rash_disease", (), np.array([prior, 1.0 - prior])),
        ConditionalTable("heart_attack", (), np.array([prior, 1.0 - prior])),
        ConditionalTable(DEMO_MINOR_SYMPTOM, ("rash_disease",), deterministic),
        ConditionalTable(DEMO_MAJOR_SYMPTOM, ("heart_attack",), deterministic),
    ]
    base = build_network(variables, tables)
    params = [
        ReportParams(DEMO_MINOR_SYMPTOM, 0.5, math.inf, DEMO_QUESTION, "minor"),
        ReportParams(DEMO_MAJOR_SYMPTOM, 0.5, math.inf, DEMO_QUESTION, "major"),
    ]
    return augment_with_severity(base, params, midpoint_axis(grid_points), link,
                                 DEMO_QUESTION), params


def severity_posterior_demo(net: Network, response) -> tuple[Posterior, Posterior]:
    """Posteriors of both demo diseases after an open-probe response."""
    from .inference import posterior
    from .reports import open_probe_evidence_for_network

    ev = open_probe_evidence_for_network(net, response)
    return (
        posterior(net, "rash_disease", ev),
        posterior(net, "heart_attack", ev),
    )
