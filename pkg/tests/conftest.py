import numpy as np
import pytest

from pixent.state import BasisPair, TwoQuditState, outcome_probabilities


def ginibre_density(d, rng, rank=None):
    n = d * d
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def near_phi_plus_density(d, rng, weight=None):
    """Phi+ projector mixed with a small random admixture, so bounds are non-trivial."""
    n = d * d
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    w = rng.uniform(0.0, 0.3) if weight is None else weight
    v = phi + w * (rng.normal(size=n) + 1j * rng.normal(size=n)) / np.sqrt(n)
    v /= np.linalg.norm(v)
    mix = rng.uniform(0.0, 0.3)
    return (1 - mix) * np.outer(v, v.conj()) + mix * ginibre_density(d, rng, rank=rng.integers(1, 4))


def brute_fidelity(rho, d):
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    return float(np.real(phi.conj() @ rho @ phi))


def probs_for(rho, d, label):
    pair = BasisPair.matched(label)
    return outcome_probabilities(TwoQuditState(d, matrix=rho), pair.a, pair.b)


def all_wf_probs(rho, d):
    """P_k for every WF basis k from one dense rho, vectorized over k."""
    return [probs_for(rho, d, f"wf:{k}") for k in range(d)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.format_results():
        terminalreporter.write_line(line)
