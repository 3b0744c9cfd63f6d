"""Report nodes: turning *unmentioned* symptoms into likelihood evidence.

A report node is a binary child of a symptom that is true iff the patient
volunteered any value for that symptom when answering an open question.
Its CPT is factored into two assessable numbers:

  * reportability  P - probability a present symptom gets mentioned
  * reporting bias B - how many times more likely a present symptom is
    mentioned than an absent one (B >= 1; B = inf means absent symptoms
    are never volunteered)

For an unmentioned symptom only the likelihood ratio
``(1-P) / (1-P/B)`` matters, so with fixed parameters the report nodes can
be replaced by a virtual finding per symptom (`soft_evidence_shortcut`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateReportNode,
    InvalidParams,
    UnknownSymptom,
    UnknownVariable,
)
from .network import ConditionalTable, Evidence, Network, Variable, build_network

REPORT_TRUE = "true"
REPORT_FALSE = "false"
ABSENT_STATE = "absent"

SEVERITY_CLASSES = ("major", "minor", "none")


def report_node_id(question_id: str, symptom_id: str) -> str:
    return f"report:{question_id}:{symptom_id}"


@dataclass(frozen=True)
class ReportParams:
    """Reporting behaviour of one symptom under one open question."""

    symptom_id: str
    reportability: float
    bias: float
    question_id: str
    severity_class: str = "none"

    def __post_init__(self):
        if not (0.0 < self.reportability < 1.0):
            raise InvalidParams(
                f"reportability for {self.symptom_id!r} must be in (0,1), "
                f"got {self.reportability}"
            )
        if math.isnan(self.bias) or self.bias < 1.0:
            raise InvalidParams(
                f"bias for {self.symptom_id!r} must be >= 1, got {self.bias}"
            )
        if self.severity_class not in SEVERITY_CLASSES:
            raise InvalidParams(
                f"severity class for {self.symptom_id!r} must be one of "
                f"{SEVERITY_CLASSES}, got {self.severity_class!r}"
            )


@dataclass(frozen=True)
class OpenProbeResponse:
    """What the patient volunteered in answer to one open question."""

    question_id: str
    reported: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "reported", dict(self.reported))


def absent_state_index(variable: Variable) -> int:
    """Index of the single absent-like state (literally named "absent")."""
    if ABSENT_STATE not in variable.states:
        raise InvalidParams(
            f"symptom {variable.id!r} has no state named {ABSENT_STATE!r}; "
            "cannot split states into present-like vs absent-like"
        )
    return variable.states.index(ABSENT_STATE)


def report_columns(reportability: float, bias: float, n_states: int,
                   absent_idx: int) -> np.ndarray:
    """(n_states, 2) block of P(report true/false | symptom state).

    Present-like states share the reportability; the absent-like state gets
    reportability/bias. bias = inf maps to a hard zero.
    """
    p_absent = 0.0 if math.isinf(bias) else reportability / bias
    out = np.empty((n_states, 2))
    out[:, 0] = reportability
    out[:, 1] = 1.0 - reportability
    out[absent_idx, 0] = p_absent
    out[absent_idx, 1] = 1.0 - p_absent
    return out


def report_cpt(params: ReportParams,
               symptom_states: Sequence[str] = ("present", "absent")) -> ConditionalTable:
    """Binary report-node CPT over the given symptom states."""
    states = tuple(symptom_states)
    if ABSENT_STATE not in states:
        raise InvalidParams(
            f"symptom {params.symptom_id!r} states {states} lack an "
            f"{ABSENT_STATE!r} state"
        )
    block = report_columns(params.reportability, params.bias, len(states),
                           states.index(ABSENT_STATE))
    return ConditionalTable(
        child=report_node_id(params.question_id, params.symptom_id),
        parents=(params.symptom_id,),
        values=block.reshape(-1),
    )


def lambda_no_report(params: ReportParams) -> float:
    """Likelihood ratio P(no report | present) / P(no report | absent).

    Equals B(1-P)/(B-P); tends to 0 as P -> 1 and to 1 as P -> 0.
    """
    p, b = params.reportability, params.bias
    if math.isinf(b):
        return 1.0 - p
    return (1.0 - p) / (1.0 - p / b)


def augment_with_reports(net: Network, params_list: Iterable[ReportParams],
                         question_id: str) -> Network:
    """Add one binary report node per symptom; original CPTs are untouched."""
    params_list = list(params_list)
    if not params_list:
        return net
    variables = list(net.variables)
    tables = list(net.tables.values())
    seen = set(net.variable_ids)
    for params in params_list:
        if params.question_id != question_id:
            raise InvalidParams(
                f"params for {params.symptom_id!r} belong to question "
                f"{params.question_id!r}, not {question_id!r}"
            )
        if params.symptom_id not in net:
            raise UnknownVariable(f"unknown symptom {params.symptom_id!r}")
        node_id = report_node_id(question_id, params.symptom_id)
        if node_id in seen:
            raise DuplicateReportNode(f"report node {node_id!r} already exists")
        seen.add(node_id)
        variables.append(Variable(node_id, (REPORT_TRUE, REPORT_FALSE), kind="report"))
        tables.append(report_cpt(params, net.variable(params.symptom_id).states))
    return build_network(variables, tables)


def _bound_symptoms(params_list: Iterable[ReportParams], question_id: str) -> dict[str, ReportParams]:
    bound = {}
    for params in params_list:
        if params.question_id == question_id:
            bound[params.symptom_id] = params
    return bound


def open_probe_evidence(response: OpenProbeResponse,
                        params_for_question: Iterable[ReportParams]) -> Evidence:
    """Evidence for an answered open question on a report-augmented network.

    Reported symptoms become hard findings with their report node true;
    every other symptom bound to the question gets report = false and no
    finding on the symptom itself.
    """
    bound = _bound_symptoms(params_for_question, response.question_id)
    hard: dict[str, str] = {}
    for symptom, state in response.reported.items():
        if symptom not in bound:
            raise UnknownSymptom(
                f"symptom {symptom!r} is not bound to question {response.question_id!r}"
            )
        hard[symptom] = state
        hard[report_node_id(response.question_id, symptom)] = REPORT_TRUE
    for symptom in bound:
        if symptom not in response.reported:
            hard[report_node_id(response.question_id, symptom)] = REPORT_FALSE
    return Evidence(hard)


def open_probe_evidence_for_network(net: Network, response: OpenProbeResponse) -> Evidence:
    """Like :func:`open_probe_evidence`, with bound symptoms read off the
    report nodes already present in an augmented network."""
    bound = [
        s for s in net.variable_ids
        if report_node_id(response.question_id, s) in net
    ]
    hard: dict[str, str] = {}
    for symptom, state in response.reported.items():
        if symptom not in bound:
            raise UnknownSymptom(
                f"symptom {symptom!r} is not bound to question {response.question_id!r}"
            )
        hard[symptom] = state
        hard[report_node_id(response.question_id, symptom)] = REPORT_TRUE
    for symptom in bound:
        if symptom not in response.reported:
            hard[report_node_id(response.question_id, symptom)] = REPORT_FALSE
    return Evidence(hard)


def soft_evidence_shortcut(net: Network, params_list: Iterable[ReportParams],
                           response: OpenProbeResponse) -> Evidence:
    """Equivalent evidence with no report nodes (fixed parameters only).

    Reported symptoms become hard findings; each unreported bound symptom
    gets a virtual finding: lambda-no-report on present-like states, 1 on
    the absent state.
    """
    bound = _bound_symptoms(params_list, response.question_id)
    hard: dict[str, str] = {}
    virtual: dict[str, tuple[float, ...]] = {}
    for symptom, state in response.reported.items():
        if symptom not in bound:
            raise UnknownSymptom(
                f"symptom {symptom!r} is not bound to question {response.question_id!r}"
            )
        hard[symptom] = state
    for symptom, params in bound.items():
        if symptom in response.reported:
            continue
        variable = net.variable(symptom)
        lam = lambda_no_report(params)
        vec = [lam] * variable.card
        vec[absent_state_index(variable)] = 1.0
        virtual[symptom] = tuple(vec)
    return Evidence(hard, virtual)
