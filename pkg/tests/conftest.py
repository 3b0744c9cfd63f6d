import numpy as np
import pytest

from dxprobe import backend
from dxprobe.network import ConditionalTable, Variable, build_network


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Pay the JIT compile cost once, outside any timed assertion.
    backend.warmup()


def make_net_a():
    """Four-node diagnostic net: two independent disorders with one symptom each.

    P(pi)=0.02, P(mig)=0.05, P(rash|pi)=0.9/0.05, P(headache|mig)=0.8/0.1.
    """
    variables = [
        Variable("poison_ivy", ("present", "absent"), kind="disorder"),
        Variable("migraine", ("present", "absent"), kind="disorder"),
        Variable("rash", ("present", "absent"), kind="symptom"),
        Variable("headache", ("present", "absent"), kind="symptom"),
    ]
    tables = [
        ConditionalTable("poison_ivy", (), np.array([0.02, 0.98])),
        ConditionalTable("migraine", (), np.array([0.05, 0.95])),
        ConditionalTable("rash", ("poison_ivy",), np.array([0.9, 0.1, 0.05, 0.95])),
        ConditionalTable("headache", ("migraine",), np.array([0.8, 0.2, 0.1, 0.9])),
    ]
    return build_network(variables, tables)


@pytest.fixture
def net_a():
    return make_net_a()


def make_learning_net(n_per_disorder=3):
    """Two independent disorders, n symptoms each; noisy single-parent links.

    P(symptom present | disorder present) = 0.8, leak 0.05.
    """
    variables = [
        Variable("d1", ("present", "absent"), kind="disorder"),
        Variable("d2", ("present", "absent"), kind="disorder"),
    ]
    tables = [
        ConditionalTable("d1", (), np.array([0.3, 0.7])),
        ConditionalTable("d2", (), np.array([0.2, 0.8])),
    ]
    for i in range(2 * n_per_disorder):
        parent = "d1" if i < n_per_disorder else "d2"
        sid = f"s{i + 1}"
        variables.append(Variable(sid, ("present", "absent"), kind="symptom"))
        tables.append(
            ConditionalTable(sid, (parent,), np.array([0.8, 0.2, 0.05, 0.95]))
        )
    return build_network(variables, tables)


@pytest.fixture
def learning_net():
    return make_learning_net()
