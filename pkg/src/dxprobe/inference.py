"""Exact inference by variable elimination.

Hard evidence is applied by slicing factor axes, virtual evidence by an
extra weighting factor on the variable; everything is normalized only once
at the end, so the normalizing constant doubles as the probability of
evidence.

Elimination order is min-degree greedy with a lexicographic tie-break on
variable id, which makes results (and intermediate factor shapes)
deterministic for a given network.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import factors as fa
from .errors import ImpossibleEvidence
from .network import Evidence, Network, Posterior, prune_barren

__all__ = ["posterior", "posteriors", "probability_of_evidence"]


def _cpt_factor(net: Network, var_id: str) -> fa.Factor:
    table = net.table(var_id)
    scope_ids = list(table.parents) + [var_id]
    idxs = [net.index(v) for v in scope_ids]
    arr = net.cpt_array(var_id)
    perm = np.argsort(idxs)
    axes = tuple(idxs[i] for i in perm)
    return fa.Factor(axes, np.ascontiguousarray(np.transpose(arr, perm)))


def _factors_for(net: Network, evidence: Evidence) -> list[fa.Factor]:
    out = []
    for var_id in net.variable_ids:
        f = _cpt_factor(net, var_id)
        # Reduce hard-evidence axes in descending axis order so positions stay valid.
        observed = [a for a in f.axes if net.variable_ids[a] in evidence.hard]
        for a in sorted(observed, reverse=True):
            v = net.variable(net.variable_ids[a])
            f = fa.reduce_state(f, a, v.state_index(evidence.hard[v.id]))
        out.append(f)
    for var_id, vec in evidence.virtual.items():
        out.append(fa.Factor((net.index(var_id),), np.asarray(vec, dtype=np.float64)))
    return out


def _elimination_order(scopes: list[tuple[int, ...]], keep: set[int],
                       names: tuple[str, ...]) -> list[int]:
    neighbors: dict[int, set[int]] = {}
    for scope in scopes:
        for v in scope:
            neighbors.setdefault(v, set())
        for i, v in enumerate(scope):
            for w in scope[i + 1:]:
                neighbors[v].add(w)
                neighbors[w].add(v)
    remaining = set(neighbors)
    order = []
    candidates = {v for v in remaining if v not in keep}
    while candidates:
        v = min(candidates, key=lambda u: (len(neighbors[u] & remaining), names[u]))
        order.append(v)
        nbrs = neighbors[v] & remaining
        nbrs.discard(v)
        for a in nbrs:
            neighbors[a] |= nbrs - {a}
            neighbors[a].discard(v)
        remaining.discard(v)
        candidates.discard(v)
    return order


def _eliminate(factor_list: list[fa.Factor], order: list[int]) -> list[fa.Factor]:
    current = list(factor_list)
    for v in order:
        bucket = [f for f in current if v in f.axes]
        if not bucket:
            continue
        current = [f for f in current if v not in f.axes]
        current.append(fa.bucket_sum_out(bucket, v))
    return current


def _unnormalized_marginal(net: Network, query_id: str, evidence: Evidence) -> np.ndarray:
    pruned = prune_barren(net, [query_id], evidence)
    flist = _factors_for(pruned, evidence)
    keep = {pruned.index(query_id)}
    order = _elimination_order([f.axes for f in flist], keep, pruned.variable_ids)
    result = fa.product_all(_eliminate(flist, order))
    qcard = pruned.card(query_id)
    if result.axes == ():
        # Query was sliced away by its own hard evidence; rebuild the point mass.
        vec = np.zeros(qcard)
        vec[pruned.variable(query_id).state_index(evidence.hard[query_id])] = float(result.values)
        return vec
    return result.values


def posterior(net: Network, query_id: str, evidence: Evidence | None = None) -> Posterior:
    """Exact marginal P(query | evidence) after barren-node pruning."""
    evidence = evidence or Evidence()
    net.variable(query_id)
    evidence.validate(net)
    values = _unnormalized_marginal(net, query_id, evidence)
    z = float(values.sum())
    if z <= 0.0:
        raise ImpossibleEvidence(
            f"evidence has probability 0 (query {query_id!r})"
        )
    v = net.variable(query_id)
    return Posterior(query_id, v.states, tuple(float(x) for x in values / z))


def posteriors(net: Network, query_ids: Iterable[str],
               evidence: Evidence | None = None) -> list[Posterior]:
    return [posterior(net, q, evidence) for q in query_ids]


def probability_of_evidence(net: Network, evidence: Evidence) -> float:
    """Exact P(evidence); virtual findings enter as likelihood weights.

    Returns 0.0 for impossible evidence rather than raising.
    """
    evidence.validate(net)
    pruned = prune_barren(net, [], evidence)
    flist = _factors_for(pruned, evidence)
    order = _elimination_order([f.axes for f in flist], set(), pruned.variable_ids)
    result = fa.product_all(_eliminate(flist, order))
    return float(result.values)
