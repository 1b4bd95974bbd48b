import math

import pytest

from stochlim.quadrature import (
    QuadratureResult,
    oscillation_quadrature,
    quadrature_sweep,
    sweep_csv_rows,
)


def closed_form_gaussian(lam):
    # separable Gaussian integrals give I(lam) = 2pi / sqrt(1 + lam^4)
    return 2 * math.pi / math.sqrt(1 + lam**4)


def test_gaussian_matches_closed_form():
    for lam in (0.5, 0.2):
        result = oscillation_quadrature(lam)
        assert abs(result.value.real - closed_form_gaussian(lam)) < 1e-7
        assert abs(result.value.imag) < 1e-9


def test_errors_decrease_along_sweep():
    results = quadrature_sweep((0.4, 0.2, 0.1))
    errors = [r.abs_error for r in results]
    assert errors[1] < errors[0]
    assert errors[2] < errors[1]
    assert errors[-1] / (2 * math.pi) < 0.01


def test_zero_function():
    result = oscillation_quadrature(0.3, "zero")
    assert result.value == 0
    assert result.target == 0


def test_sech_converges_towards_target():
    coarse = oscillation_quadrature(0.5, "sech")
    fine = oscillation_quadrature(0.2, "sech")
    assert fine.abs_error < coarse.abs_error
    assert abs(fine.target - 2 * math.pi) < 1e-12


def test_csv_rows_format():
    rows = sweep_csv_rows(
        [QuadratureResult(lam=0.4, value=6.2 + 0j, est_error=1e-9, target=2 * math.pi)]
    )
    assert rows[0] == "lambda,realPart,imagPart,absError"
    assert rows[1].startswith("0.4,6.2")


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        oscillation_quadrature(-0.1)
    with pytest.raises(ValueError):
        oscillation_quadrature(0.1, "nope")
