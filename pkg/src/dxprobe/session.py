"""Interview sessions: open-probe intake, differential, closed probes, VOI.

A session walks the observe / update / ask-next loop: the patient seeds the
differential through one open question, then the engine proposes the
closed-probe questions that most reduce differential uncertainty (myopic
expected reduction of summed disorder entropies, in bits).

State is rebuilt from the evidence log on demand: the log is the truth,
posteriors are always recomputed, so final results depend only on the
evidence set, never on arrival order.
"""
from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field

from .errors import AlreadyObserved, UnknownVariable, UnsupportedMode, WrongPhase
from .inference import posterior
from .kb import OPEN_QUESTION_ID, KnowledgeBase
from .learning import augment_with_global_params, global_param_posterior
from .network import Evidence, Network, Posterior
from .reports import OpenProbeResponse, augment_with_reports, open_probe_evidence
from .severity import augment_with_severity

MODES = ("fixed-params", "learn-global", "severity")

PHASE_OPEN = "awaiting-open-probe"
PHASE_REFINING = "refining"

VOI_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class QuestionScore:
    symptom_id: str
    score: float
    rank: int


@dataclass
class Session:
    kb: KnowledgeBase
    mode: str
    network: Network
    question_id: str
    id: str = field(default_factory=lambda: uuid.uuid4().hex)
    phase: str = PHASE_OPEN
    log: list[dict] = field(default_factory=list)
    _evidence: Evidence = field(default_factory=Evidence)
    _differential: list[Posterior] | None = None

    @property
    def evidence(self) -> Evidence:
        return self._evidence

    def observed_symptoms(self) -> set[str]:
        return {v for v in self._evidence.hard if v in self.kb.symptom_ids}


def start_session(kb: KnowledgeBase, mode: str,
                  question_id: str = OPEN_QUESTION_ID) -> Session:
    """Build the mode-appropriate augmented network and open the session."""
    if mode not in MODES:
        raise UnsupportedMode(f"unknown mode {mode!r}; expected one of {MODES}")
    params = kb.params_for_question(question_id)
    if mode == "fixed-params":
        network = augment_with_reports(kb.network, params, question_id)
    elif mode == "learn-global":
        if not params:
            raise UnsupportedMode("learn-global mode needs report parameters")
        network = augment_with_global_params(
            kb.network, params, kb.param_grid(), question_id=question_id
        )
    else:
        if not params or not all(p.severity_class in ("major", "minor") for p in params):
            raise UnsupportedMode(
                "severity mode needs a major/minor class on every report parameter"
            )
        network = augment_with_severity(
            kb.network, params, kb.severity_axis(), kb.severity_link(), question_id
        )
    return Session(kb=kb, mode=mode, network=network, question_id=question_id)


def _recompute(session: Session) -> list[Posterior]:
    posts = [
        posterior(session.network, d, session._evidence) for d in session.kb.disorders
    ]
    posts.sort(key=lambda p: (-_p_present(p), p.variable))
    session._differential = posts
    return posts


def _p_present(post: Posterior) -> float:
    if "absent" in post.states:
        return 1.0 - post.p("absent")
    return max(post.probabilities)


def differential(session: Session) -> list[Posterior]:
    """Current disorder posteriors, most probable first."""
    if session._differential is None:
        _recompute(session)
    return list(session._differential)


def submit_open_probe(session: Session, response: OpenProbeResponse) -> list[Posterior]:
    if session.phase != PHASE_OPEN:
        raise WrongPhase("open probe already submitted")
    params = session.kb.params_for_question(session.question_id)
    for symptom, state in response.reported.items():
        if symptom in session.kb.network:
            session.kb.network.variable(symptom).state_index(state)
    ev = open_probe_evidence(response, params)
    session._evidence = session._evidence.merged_with(ev)
    session.phase = PHASE_REFINING
    session.log.append({"kind": "open-probe", "response": dict(response.reported)})
    return _recompute(session)


def submit_closed_probe(session: Session, symptom_id: str, state: str) -> list[Posterior]:
    if session.phase != PHASE_REFINING:
        raise WrongPhase("answer questions after the open probe")
    variable = session.network.variable(symptom_id)  # raises UnknownVariable
    variable.state_index(state)
    if symptom_id in session._evidence.hard:
        raise AlreadyObserved(f"symptom {symptom_id!r} already observed")
    session._evidence = session._evidence.merged_with(Evidence({symptom_id: state}))
    session.log.append({"kind": "closed-probe", "symptom": symptom_id, "state": state})
    return _recompute(session)


def _entropy_bits(posts: list[Posterior]) -> float:
    h = 0.0
    for post in posts:
        for p in post.probabilities:
            if p > 0.0:
                h -= p * math.log2(p)
    return h


def next_questions(session: Session, k: int) -> list[QuestionScore]:
    """Top-k unobserved symptoms by myopic expected entropy reduction."""
    if session.phase != PHASE_REFINING:
        raise WrongPhase("question ranking needs the refining phase")
    disorders = session.kb.disorders
    evidence = session._evidence
    base = _entropy_bits(differential(session))
    scored = []
    for symptom in session.kb.symptom_ids:
        if symptom in evidence.hard:
            continue
        belief = posterior(session.network, symptom, evidence)
        expected = 0.0
        for state, p_state in zip(belief.states, belief.probabilities):
            if p_state <= 0.0:
                continue
            ev = evidence.merged_with(Evidence({symptom: state}))
            posts = [posterior(session.network, d, ev) for d in disorders]
            expected += p_state * _entropy_bits(posts)
        score = base - expected
        if score < VOI_ZERO_TOL:
            score = 0.0
        scored.append((symptom, score))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return [
        QuestionScore(symptom_id=s, score=v, rank=i + 1)
        for i, (s, v) in enumerate(scored[: max(k, 0)])
    ]


def param_posteriors(session: Session) -> tuple[Posterior, Posterior]:
    """Grid posteriors over (reportability, bias); learn-global mode only."""
    if session.mode != "learn-global":
        raise UnsupportedMode("parameter posteriors exist only in learn-global mode")
    return global_param_posterior(session.network, session._evidence, session.kb.param_grid())


def replay(kb: KnowledgeBase, mode: str, log: list[dict],
           question_id: str = OPEN_QUESTION_ID, session_id: str | None = None) -> Session:
    """Rebuild a session from a persisted evidence log."""
    session = start_session(kb, mode, question_id)
    if session_id is not None:
        session.id = session_id
    for entry in log:
        if entry["kind"] == "open-probe":
            submit_open_probe(session, OpenProbeResponse(question_id, entry["response"]))
        elif entry["kind"] == "closed-probe":
            submit_closed_probe(session, entry["symptom"], entry["state"])
        else:
            raise UnknownVariable(f"unknown log entry kind {entry['kind']!r}")
    return session
