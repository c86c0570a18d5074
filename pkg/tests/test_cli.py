"""Command line behavior: exit codes, stable output, file round trips."""
import json

import numpy as np
import pytest

from nlgc.cli import main
from nlgc.groups import cyclic, save_group_file
from nlgc.report import canonical_json, matrix_payload, state_payload
from nlgc.schmidt import BipartiteUnitary

CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)


def write_gate(path, matrix, da, db):
    path.write_text(canonical_json(matrix_payload(BipartiteUnitary(matrix, da, db))))
    return str(path)


@pytest.fixture
def cnot_file(tmp_path):
    return write_gate(tmp_path / "cnot.json", CNOT, 2, 2)


@pytest.fixture
def generic_file(tmp_path):
    rng = np.random.default_rng(11)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q, _ = np.linalg.qr(x)
    return write_gate(tmp_path / "generic.json", q, 2, 2)


def test_compile_writes_a_valid_report(cnot_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["compile", cnot_file, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["group"]["name"] == "C2"
    assert rep["costs"]["costEbits"] == 1.0
    assert rep["protocol"]["deterministic"] is True


def test_compile_stdout_is_byte_stable(cnot_file, capsys):
    assert main(["compile", cnot_file, "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["compile", cnot_file, "--seed", "5"]) == 0
    second = capsys.readouterr().out
    assert first == second
    json.loads(first)


def test_simulate_report_round_trip(cnot_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["compile", cnot_file, "--out", str(out)])
    state = tmp_path / "state.json"
    state.write_text(canonical_json(
        state_payload(np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2))))
    code = main(["simulate", str(out), "--state", str(state)])
    text = capsys.readouterr().out
    assert code == 0
    assert "deterministic=yes" in text
    assert "p=0.25 fidelity=1" in text


def test_simulate_matrix_compiles_on_the_fly(cnot_file, capsys):
    assert main(["simulate", cnot_file, "--random", "2", "--seed", "3"]) == 0
    text = capsys.readouterr().out
    assert text.count("state ") == 2
    assert "group=C2" in text


def test_verify_accepts_fresh_and_rejects_tampered(cnot_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["compile", cnot_file, "--out", str(out)])
    assert main(["verify", str(out)]) == 0
    rep = json.loads(out.read_text())
    rep["costs"]["costEbits"] = 0.25
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rep))
    assert main(["verify", str(bad)]) == 4
    text = capsys.readouterr().out
    assert "costs: FAIL" in text


def test_tampered_operators_break_the_simulation(cnot_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["compile", cnot_file, "--out", str(out)])
    rep = json.loads(out.read_text())
    zero = [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    rep["expansion"]["wOps"][1] = zero
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rep))
    assert main(["simulate", str(bad)]) == 4
    assert "deterministic=NO" in capsys.readouterr().out


def test_fallback_compilation_exits_three(generic_file, capsys):
    code = main(["compile", generic_file, "--no-projective"])
    rep = json.loads(capsys.readouterr().out)
    assert code == 3
    assert rep["expansion"]["fallback"] is True
    assert rep["costs"]["costEbits"] == 2.0


def test_projective_route_keeps_exit_zero(generic_file, capsys):
    code = main(["compile", generic_file])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0
    assert rep["expansion"]["route"] == "projective"


def test_invalid_inputs_exit_two(tmp_path, capsys, cnot_file):
    missing = str(tmp_path / "nope.json")
    assert main(["compile", missing]) == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("not json at all")
    assert main(["compile", str(garbage)]) == 2
    assert main(["compile", cnot_file, "--dims", "3", "2"]) == 2
    nonunitary = tmp_path / "nonu.json"
    nonunitary.write_text(json.dumps(
        {"dimA": 2, "dimB": 2, "matrix": [[1] * 4] * 4}))
    assert main(["compile", str(nonunitary)]) == 2
    assert main(["bogus-subcommand"]) == 2
    capsys.readouterr()


def test_schmidt_prints_rank_and_coefficients(cnot_file, capsys):
    assert main(["schmidt", cnot_file]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 2
    np.testing.assert_allclose(data["coefficients"],
                               [np.sqrt(2), np.sqrt(2)], atol=1e-9)


def test_groups_list_and_show(capsys):
    assert main(["groups", "list", "--max-order", "6"]) == 0
    listing = capsys.readouterr().out
    assert "S3  order=6  nonabelian  irrepDims=[1, 1, 2]" in listing
    assert main(["groups", "show", "S3"]) == 0
    shown = capsys.readouterr().out
    assert "identity characters: 1 1 2" in shown
    assert "inverses:" in shown
    assert main(["groups", "show", "NoSuchGroup"]) == 2
    capsys.readouterr()


def test_groups_load_registers_into_catalog_dir(tmp_path, capsys, monkeypatch):
    raw = tmp_path / "c9.json"
    save_group_file(cyclic(9), raw)
    catdir = tmp_path / "catalog"
    monkeypatch.setenv("NLGC_CATALOG_DIR", str(catdir))
    assert main(["groups", "load", str(raw)]) == 0
    assert (catdir / "C9.json").exists()
    capsys.readouterr()


def test_catalog_dir_feeds_the_search(tmp_path, capsys, monkeypatch):
    # a qutrit controlled phase needs order 3; hand the search a renamed
    # C3 through the catalog directory and check it is picked up
    w = np.exp(2j * np.pi / 3)
    m = np.diag([1, 1, 1, 1, w, w ** 2, 1, w ** 2, w]).astype(complex)
    gate = write_gate(tmp_path / "cphase.json", m, 3, 3)
    catdir = tmp_path / "catalog"
    catdir.mkdir()
    renamed = cyclic(3)
    renamed.name = "MyZ3"
    save_group_file(renamed, catdir / "MyZ3.json")
    monkeypatch.setenv("NLGC_CATALOG_DIR", str(catdir))
    assert main(["compile", gate]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["group"]["order"] == 3
