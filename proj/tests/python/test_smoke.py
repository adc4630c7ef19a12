import math
from pathlib import Path

import numpy as np
import pytest

import symphonic

ROOT = Path(__file__).resolve().parents[2]


def test_parse_and_jet():
    e = symphonic.parse("x1^2*x2 + sin(x2)", 2)
    value, grad, hess = e.jet([1.5, 0.5])
    assert value == pytest.approx(1.125 + math.sin(0.5))
    np.testing.assert_allclose(grad, [1.5, 2.25 + math.cos(0.5)], rtol=1e-14)
    np.testing.assert_allclose(hess, [[1.0, 3.0], [3.0, -math.sin(0.5)]], rtol=1e-14)
    assert e([1.5, 0.5]) == pytest.approx(value)


def test_parse_error_reports_offset():
    with pytest.raises(symphonic.ParseError, match="offset"):
        symphonic.parse("x1 + * x2", 2)


def test_zoo_lists_maps():
    ids = {entry["id"] for entry in symphonic.zoo()}
    assert {"hopf", "stereographic", "f_quad"} <= ids


def test_map_jet_of_dilation():
    jet = symphonic.map_jet("dilation:2", [0.3, 0.4])
    np.testing.assert_allclose(jet["du"], 2 * np.eye(2))
    np.testing.assert_allclose(jet["P"], 4 * np.eye(2))


def test_verify_weighted_composition():
    report = symphonic.verify("thm1_weighted", "dilation:1.5", "f_trig", p=2.5, tol=1e-6)
    assert report["verdict"] is True
    assert report["max_residual"] < 1e-6


def test_sweep_fits_exponent():
    result = symphonic.sweep("thm1_unweighted", "f_mixed", [1.0, 1.5, 2.0, 3.0])
    assert abs(result["fitted_exponent"] - 4.0) < 1e-5


def test_predicates():
    assert symphonic.check("p_symphonic", "radial_power:3,3", p=3.0, tol=1e-6)["verdict"]
    assert not symphonic.check("totally_geodesic", "cubic_warp")["verdict"]


def test_unknown_ids_raise():
    with pytest.raises(symphonic.ArgumentError, match="nope"):
        symphonic.verify("thm1_unweighted", "nope", "f_quad")


def test_run_config_file():
    report = symphonic.run_config(ROOT / "configs" / "dilation_quadratic.yaml")
    assert report["schema_version"] == symphonic.report_schema_version
    assert report["summary"]["status"] == 0
    assert report["summary"]["failed"] == 0
