"""Smoke tests for the python extension module."""

import json
import math

import fractal_harmonics as fh


def test_renorm():
    assert fh.renorm("sg:2") == "3/5"
    assert fh.renorm("sg:3") == "7/15"
    assert abs(fh.renorm_float("sg:2") - 0.6) < 1e-12


def test_spec_json_round_trip():
    spec = fh.gasket_spec_json(3)
    parsed = json.loads(spec)
    assert parsed["vertex_count"] == 10
    assert len(parsed["cells"]) == 6
    # Inline JSON is accepted wherever a spec goes.
    assert fh.renorm(spec) == "7/15"


def test_nondegeneracy():
    assert json.loads(fh.nondegeneracy_json("sg:3"))["verdict"] == "nondegenerate"
    assert json.loads(fh.nondegeneracy_json("vicsek"))["verdict"] == "degenerate"
    assert json.loads(fh.nondegeneracy_json("hexagasket3"))["verdict"] == "degenerate"


def test_connectivity():
    assert fh.vertex_connectivity("vicsek") == 2
    report = json.loads(fh.prop21_json("vicsek"))
    assert report["kappa"] == 2 and report["v0"] == 4
    assert report["verdict"] == "degenerate"


def test_certificate():
    assert fh.certify("sg:2") is True
    assert fh.certify("sg:5") is True


def test_measures():
    # Total energy of (0, 1/2, 1) is 3/2; the empty word returns it.
    assert fh.energy_measure("sg:2", ["0", "1/2", "1"], "") == "3/2"
    assert fh.kusuoka("sg:2", "") == "2"
    nu = fh.sg2_closed_forms("1/2", 0)
    assert nu == ["3/2", "3/2", "3/2"]


def test_ratio_table():
    csv = fh.ratio_table_csv("sg:3", ["0", "1", "1"], ["0", "1", "-1"], 4, [1.1])
    assert csv.startswith("m,p,S,R\n")
    assert "0.7865" in csv


def test_p_bound():
    d = fh.p_bound("sg:2")
    assert d["lambda"] == "1/15"
    assert d["r"] == "3/5"
    assert abs(d["p_bound"] - math.log(15) / math.log(9)) < 1e-12


def test_identity_and_svg():
    assert fh.embedding_identity("sg:2", 3) < 1e-10
    svg = fh.embed_svg("sg:2", 2)
    assert svg.startswith("<svg")
    assert svg.count("<line") == 27


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
