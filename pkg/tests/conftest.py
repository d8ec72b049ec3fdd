import numpy as np
import pytest

from twisted_ybe import BZero, CoefficientScheme, GradingSignature, beta_family


def scheme_for(N, q, h=0.1, K=None, gauge="unitary", b0=None, branch="graded"):
    sig = GradingSignature(N, N if K is None else K, q)
    return CoefficientScheme(sig, b0 or BZero.canonical_limit(), gauge, h, branch)


def beta_scheme(N, q, beta, h=0.1, gauge="unitary", K=None):
    return scheme_for(N, q, h, K, gauge, beta_family(N, beta, q))


def random_op_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
