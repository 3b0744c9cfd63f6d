"""Learning a patient's reporting style from one or more interviews.

Reportability and bias become discretized root variables shared by every
report node; instantiating the report nodes then updates their posteriors.
The grid posteriors can be carried over as priors for the next interview
with the same patient.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateParameterNode,
    DuplicateReportNode,
    InvalidParams,
    UnknownVariable,
)
from .network import ConditionalTable, Evidence, Network, Posterior, Variable, build_network
from .reports import ReportParams, absent_state_index, report_columns, report_node_id

GLOBAL_REPORTABILITY = "global_reportability"
GLOBAL_BIAS = "global_bias"

PRIOR_SUM_TOL = 1e-9

# (global reportability, global bias, symptom params) -> effective (P, B)
LinkPolicy = Callable[[float, float, ReportParams], tuple[float, float]]


@dataclass(frozen=True)
class GridAxis:
    """Discretization of one global parameter: point values with prior weights."""

    values: tuple[float, ...]
    priors: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "priors", tuple(float(p) for p in self.priors))
        if not self.values:
            raise InvalidParams("grid axis needs at least one point")
        if len(self.values) != len(self.priors):
            raise InvalidParams("grid axis needs one prior per point")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidParams(f"grid points must be strictly increasing, got {self.values}")
        if any(p < 0 for p in self.priors):
            raise InvalidParams("grid priors must be nonnegative")
        if abs(sum(self.priors) - 1.0) > PRIOR_SUM_TOL:
            raise InvalidParams(f"grid priors sum to {sum(self.priors)!r}, expected 1")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def state_labels(self) -> tuple[str, ...]:
        return tuple(repr(v) for v in self.values)

    def mean(self) -> float:
        return float(np.dot(self.values, self.priors))

    @staticmethod
    def uniform(values: Iterable[float]) -> "GridAxis":
        values = tuple(values)
        return GridAxis(values, tuple(1.0 / len(values) for _ in values))


@dataclass(frozen=True)
class ParamGrid:
    """Joint discretization of global reportability and bias."""

    reportability: GridAxis
    bias: GridAxis

    def __post_init__(self):
        if not all(0.0 < v < 1.0 for v in self.reportability.values):
            raise InvalidParams("reportability grid points must lie in (0,1)")
        if not all(v >= 1.0 for v in self.bias.values):
            raise InvalidParams("bias grid points must be >= 1")


def default_grid() -> ParamGrid:
    """9 reportability points 0.1..0.9, 5 bias points {1,2,5,10,20}, uniform."""
    return ParamGrid(
        GridAxis.uniform([round(0.1 * k, 1) for k in range(1, 10)]),
        GridAxis.uniform([1.0, 2.0, 5.0, 10.0, 20.0]),
    )


def identity_link(r: float, b: float, params: ReportParams) -> tuple[float, float]:
    """Every report node uses the global parameters unchanged."""
    return r, b


def offset_link(r: float, b: float, params: ReportParams) -> tuple[float, float]:
    """Per-symptom multiplicative offsets: the symptom's own fixed parameters
    scale the global ones (reportability clamped into (0,1), bias kept >= 1).
    """
    p_eff = min(max(r * params.reportability, 1e-12), 1.0 - 1e-12)
    b_eff = max(b * params.bias, 1.0) if np.isfinite(params.bias) else params.bias
    return p_eff, b_eff


def _parameter_variable(node_id: str, axis: GridAxis) -> tuple[Variable, ConditionalTable]:
    var = Variable(node_id, axis.state_labels, kind="parameter")
    return var, ConditionalTable(node_id, (), np.asarray(axis.priors))


def _report_table_with_parents(params: ReportParams, symptom: Variable,
                               r_axis: GridAxis | None, b_axis: GridAxis | None,
                               link: LinkPolicy) -> ConditionalTable:
    """Report CPT whose parents are (symptom, grid axes present).

    A single-point axis is folded into the entries instead of becoming a
    1-state parent (degenerate grids reduce to fixed parameters).
    """
    absent_idx = absent_state_index(symptom)
    r_values = r_axis.values if r_axis else (None,)
    b_values = b_axis.values if b_axis else (None,)
    r_parent = r_axis is not None and len(r_axis) > 1
    b_parent = b_axis is not None and len(b_axis) > 1

    n_r = len(r_values) if r_parent else 1
    n_b = len(b_values) if b_parent else 1
    block = np.empty((symptom.card, n_r, n_b, 2))
    for ir, r in enumerate(r_values if r_parent else r_values[:1]):
        for ib, b in enumerate(b_values if b_parent else b_values[:1]):
            r_in = r if r is not None else params.reportability
            b_in = b if b is not None else params.bias
            p_eff, b_eff = link(r_in, b_in, params)
            if not (0.0 < p_eff < 1.0):
                raise InvalidParams(
                    f"link produced reportability {p_eff!r} outside (0,1) "
                    f"for symptom {params.symptom_id!r}"
                )
            if b_eff < 1.0:
                raise InvalidParams(
                    f"link produced bias {b_eff!r} < 1 for symptom {params.symptom_id!r}"
                )
            block[:, ir, ib, :] = report_columns(p_eff, b_eff, symptom.card, absent_idx)

    parents = [params.symptom_id]
    if r_parent:
        parents.append(GLOBAL_REPORTABILITY)
    if b_parent:
        parents.append(GLOBAL_BIAS)
    values = block.reshape(symptom.card, n_r, n_b, 2).squeeze(
        axis=tuple(
            ax for ax, keep in ((1, r_parent), (2, b_parent)) if not keep
        )
    )
    return ConditionalTable(
        child=report_node_id(params.question_id, params.symptom_id),
        parents=tuple(parents),
        values=values.reshape(-1),
    )


def augment_with_global_params(net: Network, params_list: Iterable[ReportParams],
                               grid: ParamGrid, link: LinkPolicy = identity_link,
                               question_id: str = "initial") -> Network:
    """Add global parameter nodes plus one report node per symptom.

    Report nodes gain the (multi-point) grid axes as extra parents; each CPT
    entry comes from the link policy applied to the grid point values.
    """
    for node_id in (GLOBAL_REPORTABILITY, GLOBAL_BIAS):
        if node_id in net:
            raise DuplicateParameterNode(f"parameter node {node_id!r} already present")
    params_list = list(params_list)
    variables = list(net.variables)
    tables = list(net.tables.values())
    seen = set(net.variable_ids)

    if len(grid.reportability) > 1:
        var, table = _parameter_variable(GLOBAL_REPORTABILITY, grid.reportability)
        variables.append(var)
        tables.append(table)
    if len(grid.bias) > 1:
        var, table = _parameter_variable(GLOBAL_BIAS, grid.bias)
        variables.append(var)
        tables.append(table)

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
        variables.append(Variable(node_id, ("true", "false"), kind="report"))
        tables.append(
            _report_table_with_parents(
                params, net.variable(params.symptom_id), grid.reportability, grid.bias, link
            )
        )
    return build_network(variables, tables)


def _degenerate_posterior(node_id: str, axis: GridAxis) -> Posterior:
    return Posterior(node_id, axis.state_labels, (1.0,))


def global_param_posterior(net: Network, evidence: Evidence,
                           grid: ParamGrid | None = None) -> tuple[Posterior, Posterior]:
    """Exact posteriors over (reportability, bias) given all evidence.

    ``grid`` is only consulted for axes that were folded away as
    single-point (degenerate) grids.
    """
    from .inference import posterior  # local import to avoid a cycle

    if GLOBAL_REPORTABILITY in net:
        post_r = posterior(net, GLOBAL_REPORTABILITY, evidence)
    elif grid is not None and len(grid.reportability) == 1:
        post_r = _degenerate_posterior(GLOBAL_REPORTABILITY, grid.reportability)
    else:
        raise UnknownVariable(f"network has no {GLOBAL_REPORTABILITY!r} node")
    if GLOBAL_BIAS in net:
        post_b = posterior(net, GLOBAL_BIAS, evidence)
    elif grid is not None and len(grid.bias) == 1:
        post_b = _degenerate_posterior(GLOBAL_BIAS, grid.bias)
    else:
        raise UnknownVariable(f"network has no {GLOBAL_BIAS!r} node")
    return post_r, post_b


def expected_value(post: Posterior) -> float:
    """Probability-weighted mean of a grid posterior's point values."""
    values = [float(s) for s in post.states]
    return float(np.dot(values, post.probabilities))


def expected_params(posteriors: tuple[Posterior, Posterior]) -> tuple[float, float]:
    post_r, post_b = posteriors
    return expected_value(post_r), expected_value(post_b)


def carry_over_prior(posteriors: tuple[Posterior, Posterior], grid: ParamGrid) -> ParamGrid:
    """Next-interview grid: same points, priors replaced by the posteriors."""
    post_r, post_b = posteriors
    if len(post_r.probabilities) != len(grid.reportability):
        raise DimensionMismatch(
            f"reportability posterior has {len(post_r.probabilities)} entries, "
            f"grid has {len(grid.reportability)}"
        )
    if len(post_b.probabilities) != len(grid.bias):
        raise DimensionMismatch(
            f"bias posterior has {len(post_b.probabilities)} entries, "
            f"grid has {len(grid.bias)}"
        )
    return ParamGrid(
        GridAxis(grid.reportability.values, post_r.probabilities),
        GridAxis(grid.bias.values, post_b.probabilities),
    )
