import json
import os
import subprocess

import numpy as np
import pytest

import qdetect


def test_presets_are_exposed():
    ids = [p.id for p in qdetect.presets()]
    assert "fig1" in ids and "fig10" in ids
    p = qdetect.find_preset("fig1")
    assert p.system.omega_c == qdetect.hz(9e9)
    assert len(p.system.qubits) == 1
    with pytest.raises(qdetect.ConfigError):
        qdetect.find_preset("nope")


def test_errors_share_a_base():
    assert issubclass(qdetect.ConfigError, qdetect.Error)
    assert issubclass(qdetect.Error, RuntimeError)
    with pytest.raises(qdetect.Error):
        qdetect.make_signal("coherent", 1.0, 1e5)


def test_spectrum_matches_pointwise_probe():
    system, signal = qdetect.preset_signal("fig3", "coherent")
    w = qdetect.hz(np.linspace(9.99e9, 10.01e9, 101))
    out = qdetect.spectrum(system, signal, w, components=True, threads=2)
    direct = np.array([qdetect.s21_probe(x, system, signal) for x in w])
    assert np.array_equal(out["s21"], direct)
    parts = out["cavity"] + out["qubit"].sum(axis=0)
    assert np.max(np.abs(parts - out["s21"])) < 1e-14
    assert out["sidecar"]["signal"]["state"] == "coherent"


def test_coherent_routes_agree():
    system, signal = qdetect.preset_signal("fig1", "coherent")
    cav = system.cavity()
    q = system.qubits[0]
    beta = complex(np.sqrt(signal.photon_number(cav)[0]))
    for f in np.linspace(9.99e9, 10.05e9, 13):
        a = qdetect.qubit_response(qdetect.hz(f), q, cav, signal)
        b = qdetect.qubit_response_coherent_hyp(qdetect.hz(f), q, cav, beta, signal.omega(cav))
        assert abs(a - b) <= 1e-10 * abs(b)


def test_oracle_agrees_with_closed_form():
    system, signal = qdetect.preset_signal("fig3", "coherent")
    w = list(qdetect.hz(np.linspace(9.998e9, 10.006e9, 9)))
    chk = qdetect.oracle_check(system, signal, w, n_fock=30)
    assert chk.points == 9
    assert chk.max_deviation < 1e-8


def test_waveguide_and_atom():
    z = qdetect.cpw_params(qdetect.cpw_full()).z
    assert 25.0 < z < 35.0
    p = qdetect.AtomParams(0.3, 1.0, 0.1, 0.4 + 0.2j)
    s11, s21 = qdetect.atom_s_params(p)
    assert s21 == 1 + s11
    assert abs(qdetect.lambert_w(0, 1.0) - 0.5671432904097838) < 1e-15


def test_resonator_modes():
    line = qdetect.cpw_params(qdetect.cpw_full())
    geom = qdetect.ResonatorGeometry(6.666e-3, 0.0, line.c_line, line.v)
    geom = qdetect.with_coupling_ratio(geom, 0.005)
    modes = qdetect.resonances(geom, 3)
    assert [m.n for m in modes] == [1, 2, 3]
    assert all(m.q_factor > 0 for m in modes)


def test_sidecar_matches_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema_path = os.environ.get("QDETECT_SCHEMA")
    if not schema_path:
        pytest.skip("QDETECT_SCHEMA not set")
    with open(schema_path) as f:
        schema = json.load(f)
    system, signal = qdetect.preset_signal("fig7", "thermal", tau_c=1e-9)
    w = qdetect.hz(np.linspace(9.99e9, 10.01e9, 11))
    out = qdetect.spectrum(system, signal, w, components=True)
    jsonschema.validate(out["sidecar"], schema)
    sp = qdetect.compute_spectrum(system, signal, list(w))
    jsonschema.validate(json.loads(sp.sidecar_json("x", True)), schema)


def test_run_cli_in_process(tmp_path):
    rc, out, err = qdetect.run_cli(["detect", "--preset", "fig2", "--state", "vacuum", "--out", str(tmp_path)])
    assert rc == 0, err
    assert (tmp_path / "detect_vacuum.csv").exists()
    rc, _, err = qdetect.run_cli(["detect", "--preset", "fig2", "--state", "bogus"])
    assert rc == 2
    assert err.startswith("qdetect: error:")


def test_cli_binary(tmp_path):
    cli = os.environ.get("QDETECT_CLI")
    if not cli:
        pytest.skip("QDETECT_CLI not set")
    res = subprocess.run([cli, "figure", "--preset", "fig6", "--out", str(tmp_path), "--format", "json"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    side = json.loads((tmp_path / "fig6_coherent.json").read_text())
    assert len(side["data"]["omega_p"]) == side["grid"]["points"]
