"""Knowledge-base files: network + reporting metadata + probe definitions.

The on-disk format is UTF-8 JSON with top-level keys ``variables``,
``tables``, ``reports``, ``probes``, ``disorders``, ``config``. CPT values
are flat row-major arrays (see network.py). Serialization is canonical:
object keys sorted, lists in a fixed documented order, floats printed with
17 significant digits, so saving is bit-stable and generator output can be
diffed.

An infinite reporting bias (absent symptoms never volunteered) is encoded
as the JSON string "infinity".
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DxProbeError, InvalidConfig, ParseError, ValidationError
from .learning import GridAxis, ParamGrid, default_grid
from .network import ConditionalTable, Network, Variable, build_network
from .reports import ABSENT_STATE, ReportParams
from .severity import BUILTIN_LINKS, SeverityLink, midpoint_axis

OPEN_QUESTION_ID = "initial"


@dataclass
class KnowledgeBase:
    """A diagnostic network plus everything needed to interview against it."""

    network: Network
    reports: tuple[ReportParams, ...]
    probes: dict[str, tuple[str, ...]]
    disorders: tuple[str, ...]
    config: dict = field(default_factory=dict)

    def params_for_question(self, question_id: str) -> list[ReportParams]:
        return [p for p in self.reports if p.question_id == question_id]

    @property
    def symptom_ids(self) -> tuple[str, ...]:
        return tuple(sorted({p.symptom_id for p in self.reports}))

    def param_grid(self) -> ParamGrid:
        grid_cfg = self.config.get("grid")
        if not grid_cfg:
            return default_grid()
        return ParamGrid(
            GridAxis(tuple(grid_cfg["reportability"]), tuple(grid_cfg["reportability_prior"])),
            GridAxis(tuple(grid_cfg["bias"]), tuple(grid_cfg["bias_prior"])),
        )

    def severity_axis(self) -> GridAxis:
        return midpoint_axis(int(self.config.get("severity_grid_points", 1000)))

    def severity_link(self) -> SeverityLink:
        name = self.config.get("link", "quadratic")
        if name not in BUILTIN_LINKS:
            raise ValidationError(f"config.link names unknown severity link {name!r}")
        return BUILTIN_LINKS[name]

    def has_severity_classes(self) -> bool:
        return bool(self.reports) and all(
            p.severity_class in ("major", "minor") for p in self.reports
        )


# --- canonical JSON ----------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        raise ValueError("cannot serialize non-finite float")
    text = format(x, ".17g")
    # Guarantee the token parses back as a float, not an int.
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {_emit(v, indent + 1)}"
            for k, v in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_emit(v, indent + 1) for v in obj]
        if all(isinstance(v, (int, float, str)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float) or isinstance(obj, np.floating):
        return _fmt_float(float(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def canonical_json(obj) -> str:
    return _emit(obj, 0) + "\n"


def _bias_to_json(bias: float):
    return "infinity" if math.isinf(bias) else float(bias)


def _bias_from_json(raw, ctx: str) -> float:
    if raw == "infinity":
        return math.inf
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise ParseError(f"{ctx}: bias must be a number or \"infinity\", got {raw!r}")


def kb_to_jsonable(kb: KnowledgeBase) -> dict:
    variables = [
        {"id": v.id, "states": list(v.states), "kind": v.kind}
        for v in sorted(kb.network.variables, key=lambda v: v.id)
    ]
    tables = {
        t.child: {"parents": list(t.parents), "values": [float(x) for x in t.values]}
        for t in kb.network.tables.values()
    }
    reports = [
        {
            "symptom": p.symptom_id,
            "question": p.question_id,
            "reportability": float(p.reportability),
            "bias": _bias_to_json(p.bias),
            "severity": p.severity_class,
        }
        for p in sorted(kb.reports, key=lambda p: (p.question_id, p.symptom_id))
    ]
    probes = {
        q: {"type": "open", "symptoms": sorted(symptoms)}
        for q, symptoms in kb.probes.items()
    }
    return {
        "variables": variables,
        "tables": tables,
        "reports": reports,
        "probes": probes,
        "disorders": sorted(kb.disorders),
        "config": kb.config,
    }


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    """Write the canonical form; saving the same KB twice is byte-identical."""
    Path(path).write_text(canonical_json(kb_to_jsonable(kb)), encoding="utf-8")


# --- parsing -------------------------------------------------------------------------


def _expect(mapping: dict, key: str, kind, ctx: str):
    if key not in mapping:
        raise ParseError(f"{ctx}: missing field {key!r}")
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{ctx}: field {key!r} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{ctx}: field {key!r} must be {kind.__name__}")
    return value


def kb_from_jsonable(doc: dict) -> KnowledgeBase:
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    raw_vars = _expect(doc, "variables", list, "top level")
    raw_tables = _expect(doc, "tables", dict, "top level")
    raw_reports = _expect(doc, "reports", list, "top level")
    raw_probes = _expect(doc, "probes", dict, "top level")
    raw_disorders = _expect(doc, "disorders", list, "top level")
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise ParseError("top level: field 'config' must be dict")

    variables = []
    for i, rv in enumerate(raw_vars):
        ctx = f"variables[{i}]"
        if not isinstance(rv, dict):
            raise ParseError(f"{ctx}: must be an object")
        vid = _expect(rv, "id", str, ctx)
        states = _expect(rv, "states", list, ctx)
        kind = rv.get("kind", "other")
        try:
            variables.append(Variable(vid, tuple(states), kind))
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc

    tables = []
    for child, rt in raw_tables.items():
        ctx = f"tables[{child!r}]"
        if not isinstance(rt, dict):
            raise ParseError(f"{ctx}: must be an object")
        parents = _expect(rt, "parents", list, ctx)
        values = _expect(rt, "values", list, ctx)
        tables.append(ConditionalTable(child, tuple(parents), np.asarray(values, dtype=float)))

    try:
        network = build_network(variables, tables)
    except DxProbeError as exc:
        raise ValidationError(str(exc)) from exc

    probes: dict[str, tuple[str, ...]] = {}
    for q, rp in raw_probes.items():
        ctx = f"probes[{q!r}]"
        if not isinstance(rp, dict):
            raise ParseError(f"{ctx}: must be an object")
        symptoms = tuple(_expect(rp, "symptoms", list, ctx))
        for s in symptoms:
            if s not in network:
                raise ValidationError(f"{ctx}: unknown symptom {s!r}")
        probes[q] = symptoms

    reports = []
    seen_pairs = set()
    for i, rr in enumerate(raw_reports):
        ctx = f"reports[{i}]"
        if not isinstance(rr, dict):
            raise ParseError(f"{ctx}: must be an object")
        symptom = _expect(rr, "symptom", str, ctx)
        question = _expect(rr, "question", str, ctx)
        reportability = _expect(rr, "reportability", float, ctx)
        bias = _bias_from_json(rr.get("bias", 1.0), ctx)
        severity = rr.get("severity", "none")
        if symptom not in network:
            raise ValidationError(f"{ctx}: unknown symptom {symptom!r}")
        if question not in probes or symptom not in probes[question]:
            raise ValidationError(
                f"{ctx}: symptom {symptom!r} is not bound to probe {question!r}"
            )
        if (question, symptom) in seen_pairs:
            raise ValidationError(f"{ctx}: duplicate report params for {symptom!r}")
        seen_pairs.add((question, symptom))
        if ABSENT_STATE not in network.variable(symptom).states:
            raise ValidationError(
                f"{ctx}: symptom {symptom!r} has no {ABSENT_STATE!r} state"
            )
        try:
            reports.append(ReportParams(symptom, reportability, bias, question, severity))
        except DxProbeError as exc:
            raise ValidationError(f"{ctx}: {exc}") from exc

    disorders = tuple(raw_disorders)
    if not disorders:
        raise ValidationError("disorder set must be nonempty")
    for d in disorders:
        if d not in network:
            raise ValidationError(f"disorders: unknown variable {d!r}")

    kb = KnowledgeBase(network, tuple(reports), probes, disorders, config)
    if "grid" in config:
        try:
            kb.param_grid()
        except (KeyError, DxProbeError, TypeError) as exc:
            raise ValidationError(f"config.grid: {exc}") from exc
    if "link" in config:
        kb.severity_link()
    return kb


def load_kb(path: str | Path) -> KnowledgeBase:
    """Parse and fully validate a KB file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return kb_from_jsonable(doc)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture KB (``net-a`` or ``net-s``)."""
    return Path(str(resources.files("dxprobe").joinpath("fixtures", f"{name}.kb")))


# --- synthetic generator ----------------------------------------------------------------

DOMINANT_PRIOR = 0.76
SYMPTOM_ACTIVATION = 0.85
SYMPTOM_LEAK = 0.02


def _noisy_or_table(symptom: str, parents: tuple[str, ...]) -> ConditionalTable:
    n = len(parents)
    rows = []
    for combo in range(2 ** n):
        # Row-major over binary (present, absent) parents: bit 0 = present.
        n_present = sum(
            1 for k in range(n) if (combo >> (n - 1 - k)) & 1 == 0
        )
        p_absent = (1.0 - SYMPTOM_LEAK) * (1.0 - SYMPTOM_ACTIVATION) ** n_present
        rows.append([1.0 - p_absent, p_absent])
    return ConditionalTable(symptom, parents, np.asarray(rows).reshape(-1))


def generate_synthetic_referral_kb(seed: int, n_disorders: int = 5,
                               n_symptoms_per_disorder: int = 4,
                               overlap_fraction: float = 0.25,
                               reportability: float = 0.9,
                               bias: float = 5.0) -> KnowledgeBase:
    """Deterministic referral-clinic stand-in: one dominant-prior disorder,
    noisy-OR symptoms, a fraction of symptoms shared between disorders.
    """
    if n_disorders < 2:
        raise InvalidConfig("need at least 2 disorders")
    if n_symptoms_per_disorder < 1:
        raise InvalidConfig("need at least 1 symptom per disorder")
    if not 0.0 <= overlap_fraction <= 1.0:
        raise InvalidConfig("overlap_fraction must lie in [0, 1]")
    if not 0.0 < reportability < 1.0:
        raise InvalidConfig("reportability must lie in (0, 1)")
    if bias < 1.0:
        raise InvalidConfig("bias must be >= 1")

    rng = np.random.default_rng(seed)
    disorder_ids = [f"disorder_{i:02d}" for i in range(n_disorders)]
    variables = []
    tables = []
    for i, did in enumerate(disorder_ids):
        prior = DOMINANT_PRIOR if i == 0 else float(rng.uniform(0.15, 0.45))
        variables.append(Variable(did, ("present", "absent"), kind="disorder"))
        tables.append(ConditionalTable(did, (), np.array([prior, 1.0 - prior])))

    # The dominant disorder keeps sole ownership of its symptoms so its
    # "classic" (single-parent) findings stay well defined for sweeps.
    symptom_parents: dict[str, list[str]] = {}
    counter = 0
    for i, did in enumerate(disorder_ids):
        for _ in range(n_symptoms_per_disorder):
            pool = [
                s for s, ps in symptom_parents.items()
                if did not in ps and ps[0] != disorder_ids[0]
            ]
            if i > 0 and pool and rng.random() < overlap_fraction:
                shared = str(rng.choice(sorted(pool)))
                symptom_parents[shared].append(did)
            else:
                sid = f"symptom_{counter:02d}"
                counter += 1
                symptom_parents[sid] = [did]

    for sid in sorted(symptom_parents):
        variables.append(Variable(sid, ("present", "absent"), kind="symptom"))
        tables.append(_noisy_or_table(sid, tuple(symptom_parents[sid])))

    network = build_network(variables, tables)
    symptoms = tuple(sorted(symptom_parents))
    reports = tuple(
        ReportParams(sid, reportability, bias, OPEN_QUESTION_ID) for sid in symptoms
    )
    return KnowledgeBase(
        network=network,
        reports=reports,
        probes={OPEN_QUESTION_ID: symptoms},
        disorders=tuple(disorder_ids),
        config={},
    )


def with_reporting(kb: KnowledgeBase, reportability: float | None = None,
                   bias: float | None = None) -> KnowledgeBase:
    """Copy of the KB with every report parameter's numbers replaced."""
    reports = tuple(
        ReportParams(
            p.symptom_id,
            reportability if reportability is not None else p.reportability,
            bias if bias is not None else p.bias,
            p.question_id,
            p.severity_class,
        )
        for p in kb.reports
    )
    return KnowledgeBase(kb.network, reports, dict(kb.probes), kb.disorders, dict(kb.config))


def classic_symptoms(kb: KnowledgeBase, disorder: str, k: int) -> list[str]:
    """First k symptoms (sorted) whose only disorder parent is `disorder`."""
    out = []
    for sid in kb.symptom_ids:
        parents = kb.network.parents(sid)
        if parents == (disorder,):
            out.append(sid)
    return out[:k]
