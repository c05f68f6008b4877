import pytest

import crnc


def test_corpus_and_fixtures():
    names = crnc.corpus_names()
    assert "ptm_full" in names and len(names) == 6
    checks = crnc.verify_fixtures()
    assert all(ok for _, _, ok, _ in checks), [c for c in checks if not c[2]]


def test_network_from_text():
    net = crnc.network("S + E <-> C\nC -> P + E\n")
    assert net["species"] == ["S", "E", "C", "P"]
    assert net["nu"] == 3
    with pytest.raises(crnc.ParseError):
        crnc.network("A => B\n")


def test_certify_ptm_full():
    rep = crnc.certify("ptm_full")
    assert rep["certificate"]["verified"]
    assert rep["weak_contractivity"]["S_zero"] == [1, 6]
    assert rep["weak_contractivity"]["contractor_exponents"] == [0, 1, 1, 1, 1, 0]
    bad = crnc.certify("ptm_simplified", "identity")
    assert bad["certificate"]["verified"] is False


def test_mu_inf_exact():
    assert crnc.mu_inf([["-1", "1/2"], ["1/3", "-1"]]) == "-1/2"


def test_cli_in_process():
    code, rep = crnc.analyze("three_body")
    assert code == 0
    assert rep["strict_contraction"]["diagonal_check"] == "holds"
    code, sim = crnc.simulate("ptm_simplified", "nonexpansivity", "--pairs", "5", "--seed", "3")
    assert code == 0 and sim["result"]["passed"] == 5
    assert crnc.simulate("ptm_simplified", "nonexpansivity", "--pairs", "5", "--seed", "3")[1] == sim
    with pytest.raises(ValueError):
        crnc.simulate("ptm_full", "bogus")
    assert crnc.run("parse", "missing.crn")[0] == 2
