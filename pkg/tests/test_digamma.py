import math

import pytest
from scipy.special import digamma as scipy_digamma

from cotcondense.digamma import digamma
from cotcondense.errors import DomainError

EULER_MASCHERONI = 0.5772156649015329


class TestKnownValues:
    def test_psi_1(self):
        assert abs(digamma(1.0) - (-EULER_MASCHERONI)) <= 1e-10

    def test_psi_2(self):
        assert abs(digamma(2.0) - (1.0 - EULER_MASCHERONI)) <= 1e-10

    def test_psi_half(self):
        assert abs(digamma(0.5) - (-EULER_MASCHERONI - 2 * math.log(2))) <= 1e-10


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 10.0, 100.0])
def test_recurrence(x):
    assert abs(digamma(x + 1) - digamma(x) - 1.0 / x) <= 1e-10


@pytest.mark.parametrize(
    "x", [1e-3, 0.01, 0.1, 0.3, 0.7, 1.0, 1.5, 3.0, 5.999, 6.0, 17.3, 250.0, 1e6]
)
def test_against_scipy(x):
    assert abs(digamma(x) - scipy_digamma(x)) <= 1e-10


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_domain(x):
    with pytest.raises(DomainError):
        digamma(x)
