"""Diagnostic Bayesian networks that learn from unmentioned symptoms.

The package couples a small exact-inference engine with a reporting layer:
when a patient answers an open question ("what is bothering you?"), every
symptom they chose *not* to mention becomes soft evidence of absence, with
per-patient reporting style optionally learned on the fly and severity
coupling between major and minor complaints.
"""
from .backend import active_backend, set_backend, warmup
from .errors import DxProbeError
from .inference import posterior, posteriors, probability_of_evidence
from .kb import (
    KnowledgeBase,
    classic_symptoms,
    fixture_path,
    generate_synthetic_referral_kb,
    load_kb,
    save_kb,
    with_reporting,
)
from .learning import (
    GridAxis,
    ParamGrid,
    augment_with_global_params,
    carry_over_prior,
    default_grid,
    expected_params,
    global_param_posterior,
)
from .network import (
    ConditionalTable,
    Evidence,
    Network,
    Posterior,
    Variable,
    build_network,
    prune_barren,
)
from .reports import (
    OpenProbeResponse,
    ReportParams,
    augment_with_reports,
    lambda_no_report,
    open_probe_evidence,
    report_cpt,
    soft_evidence_shortcut,
)
from .session import (
    QuestionScore,
    Session,
    differential,
    next_questions,
    param_posteriors,
    start_session,
    submit_closed_probe,
    submit_open_probe,
)
from .severity import (
    QUADRATIC,
    SeverityLink,
    augment_with_severity,
    build_severity_demo,
    severity_posterior_demo,
    validate_link,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionalTable",
    "DxProbeError",
    "Evidence",
    "GridAxis",
    "KnowledgeBase",
    "Network",
    "OpenProbeResponse",
    "ParamGrid",
    "Posterior",
    "QUADRATIC",
    "QuestionScore",
    "ReportParams",
    "Session",
    "SeverityLink",
    "Variable",
    "active_backend",
    "augment_with_global_params",
    "augment_with_reports",
    "augment_with_severity",
    "build_network",
    "build_severity_demo",
    "carry_over_prior",
    "classic_symptoms",
    "default_grid",
    "differential",
    "expected_params",
    "fixture_path",
    "generate_synthetic_referral_kb",
    "global_param_posterior",
    "lambda_no_report",
    "load_kb",
    "next_questions",
    "open_probe_evidence",
    "param_posteriors",
    "posterior",
    "posteriors",
    "probability_of_evidence",
    "prune_barren",
    "report_cpt",
    "save_kb",
    "set_backend",
    "severity_posterior_demo",
    "soft_evidence_shortcut",
    "start_session",
    "submit_closed_probe",
    "submit_open_probe",
    "validate_link",
    "warmup",
    "with_reporting",
    "__version__",
]
