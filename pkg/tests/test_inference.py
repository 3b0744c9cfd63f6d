import numpy as np
import pytest

import oracle
from dxprobe.errors import ImpossibleEvidence, UnknownVariable
from dxprobe.inference import posterior, probability_of_evidence
from dxprobe.network import ConditionalTable, Evidence, Variable, build_network, prune_barren


def test_posterior_given_rash(net_a):
    # 0.02*0.9 / (0.02*0.9 + 0.98*0.05) = 0.018/0.067
    post = posterior(net_a, "poison_ivy", Evidence({"rash": "present"}))
    assert post.p("present") == pytest.approx(0.018 / 0.067, abs=1e-12)


def test_d_separated_disorder_unchanged(net_a):
    post = posterior(net_a, "migraine", Evidence({"rash": "present"}))
    assert post.p("present") == pytest.approx(0.05, abs=1e-12)


def test_prior_marginal_of_symptom(net_a):
    post = posterior(net_a, "headache")
    assert post.p("present") == pytest.approx(0.135, abs=1e-12)


def test_probability_of_evidence(net_a):
    assert probability_of_evidence(net_a, Evidence({"rash": "present"})) == pytest.approx(
        0.067, abs=1e-12
    )
    assert probability_of_evidence(net_a, Evidence()) == pytest.approx(1.0, abs=1e-12)
    # Uninformative virtual finding changes nothing.
    assert probability_of_evidence(net_a, Evidence({}, {"headache": (1.0, 1.0)})) == pytest.approx(
        1.0, abs=1e-12
    )


def test_posterior_unknown_query(net_a):
    with pytest.raises(UnknownVariable):
        posterior(net_a, "fever")


def test_impossible_evidence_raises():
    net = build_network(
        [Variable("cause", ("on", "off")), Variable("effect", ("on", "off"))],
        [
            ConditionalTable("cause", (), np.array([1.0, 0.0])),
            ConditionalTable("effect", ("cause",), np.array([1.0, 0.0, 0.0, 1.0])),
        ],
    )
    with pytest.raises(ImpossibleEvidence):
        posterior(net, "cause", Evidence({"effect": "off"}))
    assert probability_of_evidence(net, Evidence({"effect": "off"})) == 0.0


def test_posterior_of_observed_variable(net_a):
    post = posterior(net_a, "rash", Evidence({"rash": "present"}))
    assert post.p("present") == 1.0
    assert post.p("absent") == 0.0


def test_virtual_evidence_posterior(net_a):
    lam = 0.5 / 4.1
    post = posterior(net_a, "migraine", Evidence({}, {"headache": (lam, 1.0)}))
    expected = oracle.enum_posterior(net_a, "migraine", Evidence({}, {"headache": (lam, 1.0)}))
    assert post.p("present") == pytest.approx(expected[0], abs=1e-12)


@pytest.mark.parametrize("seed", range(30))
def test_random_networks_match_enumeration(seed):
    rng = np.random.default_rng(1000 + seed)
    net = oracle.random_network(rng, n_vars=int(rng.integers(3, 13)))
    evidence = oracle.random_evidence(rng, net)
    query = str(rng.choice([v for v in net.variable_ids if v not in evidence.hard]))
    expected = oracle.enum_posterior(net, query, evidence)
    got = posterior(net, query, evidence)
    np.testing.assert_allclose(got.probabilities, expected, atol=1e-10)
    z_expected = oracle.enum_prob_evidence(net, evidence)
    assert probability_of_evidence(net, evidence) == pytest.approx(z_expected, rel=1e-10)


@pytest.mark.parametrize("seed", range(15))
def test_prune_barren_preserves_queried_posteriors(seed):
    rng = np.random.default_rng(2000 + seed)
    net = oracle.random_network(rng, n_vars=10)
    evidence = oracle.random_evidence(rng, net)
    free = [v for v in net.variable_ids if v not in evidence.hard]
    query = str(rng.choice(free))
    pruned = prune_barren(net, [query], evidence)
    before = posterior(net, query, evidence)
    after = posterior(pruned, query, evidence)
    np.testing.assert_allclose(before.probabilities, after.probabilities, atol=1e-12)


@pytest.mark.parametrize("scale", [1e-6, 0.5, 3.0, 1e6])
def test_virtual_rescaling_invariance(net_a, scale):
    base = Evidence({}, {"headache": (0.25, 1.0)})
    scaled = Evidence({}, {"headache": (0.25 * scale, 1.0 * scale)})
    p0 = posterior(net_a, "migraine", base)
    p1 = posterior(net_a, "migraine", scaled)
    np.testing.assert_allclose(p0.probabilities, p1.probabilities, atol=1e-12)


def test_multi_state_network_matches_enumeration():
    rng = np.random.default_rng(77)
    net = oracle.random_network(rng, n_vars=6, max_card=4)
    evidence = oracle.random_evidence(rng, net)
    for query in net.variable_ids:
        if query in evidence.hard:
            continue
        expected = oracle.enum_posterior(net, query, evidence)
        got = posterior(net, query, evidence)
        np.testing.assert_allclose(got.probabilities, expected, atol=1e-10)
