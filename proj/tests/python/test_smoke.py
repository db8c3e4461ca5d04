import json
import math

import pytest

import infoineq


def test_list_models():
    names = [m["name"] for m in infoineq.list_models()]
    assert len(names) == 7
    assert names[0] == "uniform-max"


def test_naudts_bound_is_attained():
    r = infoineq.bound("uniform-max", 2.0, {"n": 5})
    assert r["bound"] == pytest.approx(4 / 35, rel=1e-9)
    assert r["attained"] is True
    assert list(r) [:4] == ["method", "model", "hyper", "theta"]


def test_hcr_is_not_attained():
    r = infoineq.bound("uniform-max", 1.0, {"n": 1}, method="hcr")
    assert r["bound"] < 1 / 3
    assert r["attained"] is False


def test_bhattacharyya_self_pair():
    r = infoineq.bound("normal-x4", 1.0, method="bhatt", order=2, self_pair=True)
    assert r["bound"] == pytest.approx(32 / 3, rel=1e-6)


def test_variance_and_mc():
    assert infoineq.variance("uniform-joint-max", 1.0, {"n": 4}) == pytest.approx(2 / 75, abs=1e-8)
    a = infoineq.mc_expectation("uniform-max", 1.0, {"n": 5}, samples=20000, seed=3)
    b = infoineq.mc_expectation("uniform-max", 1.0, {"n": 5}, samples=20000, seed=3)
    assert a == b
    assert abs(a["mean"] - 1.0) <= 4 * a["stderr"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        infoineq.bound("uniform-max", -1.0, {"n": 5})
    with pytest.raises(ValueError):
        infoineq.bound("no-such-model", 1.0)
    with pytest.raises(infoineq.SupportViolation):
        infoineq.bound("uniform-max", 1.0, {"n": 1}, method="bhatt-dd", nodes=[1.5], self_pair=True)


def test_synth_location():
    g = infoineq.synth_location(lambda x: math.exp(-x), lambda x: x - 1.0, 0.0, 0.0, math.inf)
    assert g.normalizer == pytest.approx(1.0, rel=1e-9)
    for x in (0.5, 1.0, 3.0):
        assert g.g(x) == pytest.approx(x * math.exp(-x), abs=1e-6)
    assert g.to_csv().startswith("x,kernel,g\n")


def test_suites_and_cli():
    assert infoineq.reduction_suite()["passed"] is True
    assert infoineq.attainment_suite("expmin", [1.0], {"n": 3})["passed"] is True
    code, out, _ = infoineq.run_cli(["bound", "--model", "expmin", "--hyper", "n=3", "--theta", "0.5"])
    assert code == 0
    assert json.loads(out)["bound"] == pytest.approx(1 / 9)
