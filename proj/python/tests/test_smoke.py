import math

import numpy as np
import pytest

import xipsi


def test_frechet_descriptor():
    r = xipsi.measures({"family": "frechet", "w_pi": 0.5, "w_m": 0.5})
    assert r["method"] == "exact"
    assert r["xi"] == pytest.approx(0.25, abs=1e-12)
    assert r["psi"] == pytest.approx(0.5, abs=1e-12)


def test_checkerboard_minimiser():
    r = xipsi.measures({"family": "checkerboard", "delta": [[0, 0.5], [0.5, 0]]})
    assert (r["xi"], r["psi"]) == pytest.approx((0.5, -0.5), abs=1e-12)


def test_infeasible_checkerboard_raises():
    with pytest.raises(xipsi.InfeasibleError):
        xipsi.measures({"family": "checkerboard", "delta": [[0.5, 0.5], [0, 0]]})


def test_bad_descriptor_raises_value_error():
    with pytest.raises(ValueError):
        xipsi.measures({"family": "nope"})


def test_cdown_endpoint_and_cubic_round_trip():
    xi, psi = xipsi.cdown_measures(2.0)
    assert xi == pytest.approx(12 * math.log(2) - 8, abs=1e-12)
    assert psi == pytest.approx(-0.5, abs=1e-12)
    mu = xipsi.mu_of_y(-0.25)
    assert xipsi.cdown_measures(mu)[1] == pytest.approx(-0.25, abs=1e-10)


def test_grid_of_independence():
    n = 100
    v = (np.arange(n) + 0.5) / n
    r = xipsi.grid_measures(np.tile(v, (n, 1)))
    assert abs(r["xi"]) < 1e-3 and abs(r["psi"]) < 1e-3


def test_region_check_and_boundary():
    assert xipsi.region_check(0.25, 0.5)["in_upper"]
    assert not xipsi.region_check(0.1, 0.5)["in_upper"]
    rows = xipsi.boundary("upper", 3)
    assert rows[1] == pytest.approx((0.5, 0.25, 0.5))


def test_strip_path_point():
    a, b = xipsi.path_params(1.265)
    xi, psi = xipsi.strip_measures(a, b)
    assert xi == pytest.approx(0.135, abs=5e-3)
    assert psi == pytest.approx(-0.328, abs=5e-3)


def test_qp_independence():
    sol = xipsi.qp_solve(0.0, 16)
    v = (np.arange(16) + 0.5) / 16
    assert np.max(np.abs(sol["h"] - v[None, :])) < 1e-6
    assert sol["feasibility_residual"] <= 1e-8


def test_kkt_identity():
    assert xipsi.kkt_residual_upper(0.25, 50) < 1e-12
