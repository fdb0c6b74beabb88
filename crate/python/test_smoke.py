import json

import pytest

import pyree2f4


def test_d0_and_classification():
    assert pyree2f4.d0(1) == 64638
    assert pyree2f4.classify(1, 13) == ("Phi8p", 1)
    with pytest.raises(ValueError):
        pyree2f4.classify(1, 9)


def test_hecke_matrix():
    rows, cols, entries = pyree2f4.hecke_matrix(1, 5)
    assert cols[0] == "ind"
    assert len(rows) == len(entries)
    assert all(len(r) == len(cols) for r in entries)


def test_bounds_and_pins():
    assert pyree2f4.pins("phi8p", 1, 13) == {"h": 1, "j": 1, "x": 2}
    b = pyree2f4.bounds("phi8p", 1, 13)
    assert b["x"][0] <= 2 <= (b["x"][1] if b["x"][1] is not None else 2)


def test_smallest_degree():
    verdict, values = pyree2f4.verify_smallest_degree("phi8p", 1, 13)
    assert verdict == "holds"
    assert values["phi21"] == "11769507827/3"
    assert values["phi2"] == "64638"


def test_cli_round_trip():
    code, out, _ = pyree2f4.run_cli(["order", "--n", "1", "--format", "json"])
    assert code == 0
    assert json.loads(out)["result"]["value"] == "264905352699586176614400"
    code, _, err = pyree2f4.run_cli(["classify", "--n", "1"])
    assert code == 2 and err
