import json
import pathlib

import pytest

import selfsim

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_version():
    assert selfsim.__version__


def test_analyze_example1():
    r = selfsim.analyze([[2, 1], [1, 2]], [[1, 1], [0, 1]])
    assert r["rho"] == "1/2"
    assert r["contracting"] is True
    assert r["regular"] == "YES"


def test_odometer_k_theory():
    k = selfsim.k_theory([[2]], [[1]])
    assert k["K0"]["group"] == "Z"
    assert k["K1"]["group"] == "Z"
    assert selfsim.isotropy_orders([[2]], [[1]]) == ["inf"]


def test_invalid_pair_raises():
    with pytest.raises(selfsim.SelfsimError):
        selfsim.analyze([[0]], [[1]])


def test_cli_putnam2kep():
    out = selfsim.cli("putnam2kep", DATA / "putnam_ex.json")
    assert out["A"] == [[2, 1], [2, 1]]
    assert out["B"] == [[1, 0], [1, 0]]


def test_cli_invalid_exit_code():
    code, out, _ = selfsim.run_cli(["validate", str(DATA / "malformed.json")])
    assert code == 2
    assert json.loads(out)["error"] == "INVALID_INPUT"


def test_selftest_passes():
    checks = selfsim.selftest(1)
    assert checks
    assert all(ok for _, ok in checks)
