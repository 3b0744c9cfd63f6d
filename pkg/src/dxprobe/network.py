"""Discrete Bayesian network representation: variables, tables, evidence.

Conventions fixed here and relied on by the file format:

  * CPT values are stored flat in row-major order over (parent state
    combinations, child states), parents enumerated in their declared order.
    Equivalently: ``values.reshape(*parent_cards, child_card)`` in C order.
  * Networks are immutable after ``build_network``; augmentation helpers
    construct new networks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CyclicGraph,
    MalformedEvidence,
    MalformedTable,
    MissingTable,
    UnknownState,
    UnknownVariable,
)

VARIABLE_KINDS = ("disorder", "symptom", "report", "parameter", "other")

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Variable:
    """A categorical network variable."""

    id: str
    states: tuple[str, ...]
    kind: str = "other"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 2:
            raise ValueError(f"variable {self.id!r} needs at least 2 states")
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"variable {self.id!r} has duplicate state labels")
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"variable {self.id!r} has unknown kind {self.kind!r}")

    @property
    def card(self) -> int:
        return len(self.states)

    def state_index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownState(f"variable {self.id!r} has no state {state!r}") from None


@dataclass(frozen=True)
class ConditionalTable:
    """P(child | parents) with values flat in row-major (parents..., child) order."""

    child: str
    parents: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "values", np.ascontiguousarray(self.values, dtype=np.float64).reshape(-1)
        )


@dataclass(frozen=True)
class Evidence:
    """Hard findings (variable = state) plus virtual likelihood-vector findings."""

    hard: Mapping[str, str] = field(default_factory=dict)
    virtual: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hard", dict(self.hard))
        object.__setattr__(
            self, "virtual", {k: tuple(float(w) for w in v) for k, v in self.virtual.items()}
        )
        overlap = set(self.hard) & set(self.virtual)
        if overlap:
            raise MalformedEvidence(
                f"variables in both hard and virtual evidence: {sorted(overlap)}"
            )
        for var, vec in self.virtual.items():
            if any(w < 0 for w in vec):
                raise MalformedEvidence(f"virtual vector for {var!r} has negative weight")
            if not any(w > 0 for w in vec):
                raise MalformedEvidence(f"virtual vector for {var!r} has no positive weight")

    @property
    def variables(self) -> set[str]:
        return set(self.hard) | set(self.virtual)

    def is_empty(self) -> bool:
        return not self.hard and not self.virtual

    def validate(self, net: "Network") -> None:
        for var, state in self.hard.items():
            net.variable(var).state_index(state)
        for var, vec in self.virtual.items():
            v = net.variable(var)
            if len(vec) != v.card:
                raise MalformedEvidence(
                    f"virtual vector for {var!r} has {len(vec)} weights, expected {v.card}"
                )

    def merged_with(self, other: "Evidence") -> "Evidence":
        clash = self.variables & other.variables
        if clash:
            raise MalformedEvidence(f"evidence conflict on {sorted(clash)}")
        return Evidence({**self.hard, **other.hard}, {**self.virtual, **other.virtual})


@dataclass(frozen=True)
class Posterior:
    """Exact marginal distribution over one variable's states."""

    variable: str
    states: tuple[str, ...]
    probabilities: tuple[float, ...]

    def p(self, state: str) -> float:
        try:
            return self.probabilities[self.states.index(state)]
        except ValueError:
            raise UnknownState(f"{self.variable!r} has no state {state!r}") from None

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.states, self.probabilities))


class Network:
    """Validated immutable DAG of categorical variables with one CPT each.

    Use :func:`build_network`; the constructor assumes pre-validated input.
    """

    def __init__(self, variables: Sequence[Variable], tables: Mapping[str, ConditionalTable]):
        self._variables: dict[str, Variable] = {v.id: v for v in variables}
        self._tables: dict[str, ConditionalTable] = dict(tables)
        self._index: dict[str, int] = {v.id: i for i, v in enumerate(variables)}
        children: dict[str, list[str]] = {v.id: [] for v in variables}
        for table in self._tables.values():
            for p in table.parents:
                children[p].append(table.child)
        self._children: dict[str, tuple[str, ...]] = {
            k: tuple(v) for k, v in children.items()
        }

    # --- lookups -------------------------------------------------------------

    @property
    def variable_ids(self) -> tuple[str, ...]:
        return tuple(self._variables)

    @property
    def variables(self) -> tuple[Variable, ...]:
        return tuple(self._variables.values())

    @property
    def tables(self) -> dict[str, ConditionalTable]:
        return dict(self._tables)

    def __contains__(self, var_id: str) -> bool:
        return var_id in self._variables

    def __len__(self) -> int:
        return len(self._variables)

    def variable(self, var_id: str) -> Variable:
        try:
            return self._variables[var_id]
        except KeyError:
            raise UnknownVariable(f"unknown variable {var_id!r}") from None

    def table(self, var_id: str) -> ConditionalTable:
        self.variable(var_id)
        return self._tables[var_id]

    def index(self, var_id: str) -> int:
        return self._index[var_id]

    def card(self, var_id: str) -> int:
        return self.variable(var_id).card

    def parents(self, var_id: str) -> tuple[str, ...]:
        return self.table(var_id).parents

    def children(self, var_id: str) -> tuple[str, ...]:
        self.variable(var_id)
        return self._children[var_id]

    def variables_of_kind(self, kind: str) -> tuple[str, ...]:
        return tuple(v.id for v in self._variables.values() if v.kind == kind)

    def cpt_array(self, var_id: str) -> np.ndarray:
        """CPT reshaped to (parent cards..., child card) in declared parent order."""
        t = self.table(var_id)
        shape = tuple(self.card(p) for p in t.parents) + (self.card(var_id),)
        return t.values.reshape(shape)


def _check_table(table: ConditionalTable, variables: Mapping[str, Variable]) -> None:
    child = variables[table.child]
    parent_cards = []
    for p in table.parents:
        if p not in variables:
            raise UnknownVariable(
                f"table for {table.child!r} references unknown parent {p!r}"
            )
        parent_cards.append(variables[p].card)
    expected = child.card * int(np.prod(parent_cards)) if parent_cards else child.card
    if table.values.size != expected:
        raise MalformedTable(
            f"table for {table.child!r} has {table.values.size} entries, expected {expected}"
        )
    if np.any(table.values < 0.0) or np.any(table.values > 1.0):
        raise MalformedTable(f"table for {table.child!r} has entries outside [0, 1]")
    rows = table.values.reshape(-1, child.card)
    sums = rows.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise MalformedTable(
            f"table for {table.child!r}: row {bad} sums to {sums[bad]:.12g}, expected 1"
        )


def _check_acyclic(variables: Iterable[str], parents: Mapping[str, tuple[str, ...]]) -> None:
    # Kahn's algorithm; anything left over sits on a cycle.
    remaining = {v: set(parents[v]) for v in variables}
    ready = sorted(v for v, ps in remaining.items() if not ps)
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        del remaining[v]
        for w, ps in remaining.items():
            ps.discard(v)
        ready = sorted(v for v, ps in remaining.items() if not ps)
    if remaining:
        cyclic = sorted(remaining)
        raise CyclicGraph(f"cycle through variables {cyclic}")


def build_network(variables: Sequence[Variable], tables: Iterable[ConditionalTable]) -> Network:
    """Validate and assemble a network.

    Raises CyclicGraph, MissingTable, MalformedTable or UnknownVariable,
    naming the offending variable.
    """
    var_map: dict[str, Variable] = {}
    for v in variables:
        if v.id in var_map:
            raise ValueError(f"duplicate variable id {v.id!r}")
        var_map[v.id] = v

    table_map: dict[str, ConditionalTable] = {}
    for t in tables:
        if t.child not in var_map:
            raise UnknownVariable(f"table for unknown variable {t.child!r}")
        if t.child in table_map:
            raise MalformedTable(f"variable {t.child!r} has more than one table")
        table_map[t.child] = t

    for v in var_map:
        if v not in table_map:
            raise MissingTable(f"variable {v!r} has no table")

    for t in table_map.values():
        _check_table(t, var_map)

    _check_acyclic(var_map, {v: table_map[v].parents for v in var_map})
    return Network(list(var_map.values()), table_map)


def prune_barren(net: Network, query_ids: Iterable[str], evidence: Evidence) -> Network:
    """Drop barren nodes: unobserved, unqueried, with no non-barren descendants.

    Queried posteriors are unchanged by construction: a barren node is a leaf
    at the moment it is removed, so its CPT is the only factor mentioning it
    and it sums to 1.
    """
    query = set(query_ids)
    for q in query:
        net.variable(q)
    evidence.validate(net)
    protected = query | evidence.variables

    kept = set(net.variable_ids)
    # Child counts restricted to kept nodes; strip unprotected leaves until fixpoint.
    changed = True
    while changed:
        changed = False
        for v in sorted(kept):
            if v in protected:
                continue
            if not any(c in kept for c in net.children(v)):
                kept.discard(v)
                changed = True

    variables = [net.variable(v) for v in net.variable_ids if v in kept]
    tables = {v.id: net.table(v.id) for v in variables}
    return Network(variables, tables)
