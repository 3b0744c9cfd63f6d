"""Self-checks for the test oracles: the scalar-loop enumerator and the
vectorized full-joint enumerator must agree exactly."""
import numpy as np
import pytest

import oracle


@pytest.mark.parametrize("seed", range(12))
def test_fast_joint_matches_scalar_loop(seed):
    rng = np.random.default_rng(9000 + seed)
    net = oracle.random_network(rng, n_vars=int(rng.integers(3, 9)), max_card=3)
    evidence = oracle.random_evidence(rng, net)
    for q in net.variable_ids:
        np.testing.assert_allclose(
            oracle.enum_marginal(net, q, evidence),
            oracle.slow_marginal(net, q, evidence),
            atol=1e-13,
        )
    assert oracle.enum_prob_evidence(net, evidence) == pytest.approx(
        oracle.slow_prob_evidence(net, evidence), abs=1e-13
    )


def test_severity_closed_forms_are_the_published_fractions():
    # 1/595 and 1/265: the worked two-disease example with uniform minor
    # reportability; derived by exact polynomial integration.
    assert oracle.severity_minor_reported_posterior() == pytest.approx(1 / 595)
    assert oracle.severity_major_reported_posterior() == pytest.approx(1 / 265)
