import json
from pathlib import Path

import pytest

from cotcondense.errors import DomainError
from cotcondense.validate import gaussian_mi_check, tolerance_for

FIXTURE = Path(__file__).parent / "fixtures" / "small_sample_reference.json"


def test_independence_passes():
    result = gaussian_mi_check(m=2000, k=5, rho=0.0, seed=0)
    assert abs(result["estimate_nats"]) <= 0.1
    assert result["passed"]


def test_strong_correlation_passes():
    result = gaussian_mi_check(m=2000, k=5, rho=0.9, seed=1)
    assert result["truth_nats"] == pytest.approx(0.8303656034108254)
    assert result["abs_error"] <= 0.1
    assert result["passed"]


def test_small_sample_uses_pinned_tolerance():
    fixture = json.loads(FIXTURE.read_text(encoding="utf-8"))
    assert tolerance_for(50) == fixture["pinned_tolerance"]
    # The pinned bound covers the worst seed observed in the reference run.
    assert fixture["abs_error_max"] <= fixture["pinned_tolerance"]
    result = gaussian_mi_check(m=50, k=5, rho=0.9, seed=3)
    assert result["tolerance"] == fixture["pinned_tolerance"]


def test_deterministic_per_seed():
    a = gaussian_mi_check(m=300, k=5, rho=0.5, seed=9)
    b = gaussian_mi_check(m=300, k=5, rho=0.5, seed=9)
    assert a["estimate_nats"] == b["estimate_nats"]


def test_rho_domain():
    with pytest.raises(DomainError):
        gaussian_mi_check(m=100, rho=1.0)


def test_m_domain():
    with pytest.raises(DomainError):
        gaussian_mi_check(m=4, k=5)
