import json

import numpy as np
import pytest

from cmvscat import fileio
from cmvscat.circle import CircleGrid
from cmvscat.cli import main
from cmvscat.config import RunConfig
from cmvscat.errors import InputError
from cmvscat.families import from_string
from cmvscat.verblunsky import VerblunskySequence

FAST = ["--grid", "256", "--levels", "4", "--window", "48", "--depth", "8"]


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_load_scattering_coeffs(tmp_path):
    path = _write(
        tmp_path, "r.json", json.dumps({"type": "coeffs", "entries": [[-1, 0.5, 0.0]]})
    )
    R = fileio.load_scattering(path, 256)
    assert abs(R.coefficient(-1) - 0.5) < 1e-15
    assert R.exact_coeffs


def test_load_scattering_samples(tmp_path):
    grid = CircleGrid(64)
    vals = (0.25 * np.conj(grid.nodes)).tolist()
    data = {"type": "samples", "grid": 64,
            "values": [[v.real, v.imag] for v in vals]}
    path = _write(tmp_path, "r.json", json.dumps(data))
    R = fileio.load_scattering(path, 256)
    assert R.grid.size == 64
    assert abs(R.coefficient(-1) - 0.25) < 1e-12


def test_load_scattering_csv(tmp_path):
    grid = CircleGrid(64)
    lines = ["theta,re,im"]
    for th, v in zip(grid.theta, 0.5 * np.conj(grid.nodes)):
        lines.append(f"{float(th)!r},{float(v.real)!r},{float(v.imag)!r}")
    path = _write(tmp_path, "r.csv", "\n".join(lines) + "\n")
    R = fileio.load_scattering(path, 256)
    assert abs(R.coefficient(-1) - 0.5) < 1e-12


def test_load_scattering_bad_json(tmp_path):
    path = _write(tmp_path, "r.json", "{not json")
    with pytest.raises(InputError):
        fileio.load_scattering(path, 256)


def test_alphas_roundtrip(tmp_path):
    seq = VerblunskySequence(-2, np.array([0.1, 0.2j, -0.3, 0.0, 0.25]),
                             np.linspace(0.8, 1.0, 6))
    path = _write(tmp_path, "a.json", fileio.save_alphas(seq))
    back = fileio.load_alphas(path)
    assert back.lo == -2
    assert np.max(np.abs(back.alphas - seq.alphas)) < 1e-15
    assert np.max(np.abs(back.a0s - seq.a0s)) < 1e-15


def test_cli_inverse_monomial(tmp_path):
    inp = _write(
        tmp_path, "r.json", json.dumps({"type": "coeffs", "entries": [[-1, 0.5, 0.0]]})
    )
    out = str(tmp_path / "alphas.json")
    code = main(["inverse", "--input", inp, "--out", out] + FAST)
    assert code == 0
    seq = fileio.load_alphas(out)
    assert abs(seq.alpha(0) + 0.5) < 1e-10
    assert abs(seq.alpha(1)) < 1e-10


def test_cli_inverse_zero_family(tmp_path):
    out = str(tmp_path / "alphas.json")
    code = main(["inverse", "--family", "zero", "--out", out] + FAST)
    assert code == 0
    seq = fileio.load_alphas(out)
    assert np.max(np.abs(seq.alphas)) < 1e-14


def test_cli_inverse_rejects_unimodular_sample(tmp_path):
    grid = CircleGrid(64)
    vals = np.full(64, 0.5 + 0j)
    vals[3] = 1.0
    data = {"type": "samples", "grid": 64,
            "values": [[v.real, v.imag] for v in vals]}
    inp = _write(tmp_path, "r.json", json.dumps(data))
    code = main(["inverse", "--input", inp, "--out", str(tmp_path / "a.json")] + FAST)
    assert code == 2


def test_cli_direct_zero_alphas(tmp_path):
    alphas = _write(
        tmp_path, "a.json", json.dumps({"lo": 0, "alphas": [[0.0, 0.0]]})
    )
    out = str(tmp_path / "rec.json")
    code = main(["direct", "--alphas", alphas, "--out", out] + FAST)
    assert code == 0
    data = json.loads(open(out).read())
    sup = max(abs(complex(re, im)) for re, im in data["R"])
    assert sup < 1e-12


def test_cli_direct_roundtrip_monomial(tmp_path):
    inp = _write(
        tmp_path, "r.json", json.dumps({"type": "coeffs", "entries": [[-1, 0.5, 0.0]]})
    )
    alphas = str(tmp_path / "a.json")
    assert main(["inverse", "--input", inp, "--out", alphas] + FAST) == 0
    out = str(tmp_path / "rec.json")
    assert main(["direct", "--alphas", alphas, "--out", out] + FAST) == 0
    data = json.loads(open(out).read())
    grid = CircleGrid(256)
    rec = np.array([complex(re, im) for re, im in data["R"]])
    assert np.max(np.abs(rec - 0.5 * np.conj(grid.nodes))) < 1e-3


def test_cli_direct_rejects_large_alpha(tmp_path):
    alphas = _write(
        tmp_path, "a.json", json.dumps({"lo": 0, "alphas": [[1.0, 0.0]]})
    )
    code = main(["direct", "--alphas", alphas, "--out", str(tmp_path / "o.json")]
                + FAST)
    assert code == 2


def test_cli_direct_explicit_points(tmp_path):
    alphas = _write(
        tmp_path, "a.json",
        json.dumps({"lo": 0, "alphas": [[-0.5, 0.0]]}),
    )
    out = str(tmp_path / "rec.json")
    code = main(["direct", "--alphas", alphas, "--z", "0.5;0.25j", "--out", out]
                + FAST)
    assert code == 0
    data = json.loads(open(out).read())
    val = complex(*data["R"][0])
    assert abs(val - 0.25) < 1e-6


def test_cli_roundtrip_report(tmp_path):
    out = str(tmp_path / "report.json")
    code = main(
        ["roundtrip", "--family", "monomial,gamma=0.5,k=1", "--ladder", "0",
         "--out", out] + FAST
    )
    assert code == 0
    rep = json.loads(open(out).read())
    assert rep["sup_error"] <= 1e-3


def test_cli_spectrum_csv(tmp_path):
    out = str(tmp_path / "density.csv")
    rep = str(tmp_path / "moments.json")
    code = main(
        ["spectrum", "--family", "monomial,gamma=0.5,k=1", "--out", out,
         "--report", rep, "--levels", "1", "--grid", "256"]
    )
    assert code == 0
    header = open(out).readline().strip().split(",")
    assert header == ["theta", "re11", "im11", "re12", "im12",
                      "re21", "im21", "re22", "im22"]
    moments = json.loads(open(rep).read())
    assert moments["max_abs_dev"] <= 1e-6


def test_cli_check_passes(tmp_path):
    out = str(tmp_path / "check.json")
    code = main(
        ["check", "--family", "monomial,gamma=0.5,k=1", "--light", "--out", out]
        + FAST
    )
    assert code == 0
    rep = json.loads(open(out).read())
    assert rep["all_passed"]


def test_cli_dump_matrix(tmp_path):
    alphas = _write(
        tmp_path, "a.json", json.dumps({"lo": 0, "alphas": [[-0.5, 0.0]]})
    )
    out = str(tmp_path / "matrix.csv")
    code = main(["dump-matrix", "--alphas", alphas, "--window", "8", "--out", out])
    assert code == 0
    rows = open(out).read().strip().splitlines()
    assert rows[0] == "row,col,re,im"
    assert len(rows) > 10


def test_cli_deterministic_output(tmp_path):
    a = str(tmp_path / "a1.json")
    b = str(tmp_path / "a2.json")
    for out in (a, b):
        assert main(
            ["inverse", "--family", "random,degree=4,margin=0.3,seed=5",
             "--out", out] + FAST
        ) == 0
    assert open(a).read() == open(b).read()


def test_cli_direct_ring_spec(tmp_path):
    alphas = _write(
        tmp_path, "a.json", json.dumps({"lo": 0, "alphas": [[-0.5, 0.0]]})
    )
    out = str(tmp_path / "ring.json")
    code = main(["direct", "--alphas", alphas, "--ring-radius", "0.5",
                 "--ring-count", "16", "--out", out] + FAST)
    assert code == 0
    data = json.loads(open(out).read())
    assert len(data["z"]) == 16
    # harmonic extension of 0.5 tbar on the ring of radius 0.5
    for (zr, zi), (rr, ri) in zip(data["z"], data["R"]):
        assert abs(complex(rr, ri) - 0.5 * np.conj(complex(zr, zi))) < 1e-8


def test_cli_thread_cap_is_deterministic(tmp_path, monkeypatch):
    inp = _write(
        tmp_path, "r.json", json.dumps({"type": "coeffs", "entries": [[-1, 0.5, 0.0]]})
    )
    a = str(tmp_path / "a1.json")
    b = str(tmp_path / "a2.json")
    assert main(["inverse", "--input", inp, "--out", a] + FAST) == 0
    monkeypatch.setenv("CMV_SCATTER_THREADS", "4")
    assert main(["inverse", "--input", inp, "--out", b] + FAST) == 0
    assert open(a).read() == open(b).read()


def test_cli_numerical_failure_exit_code(tmp_path):
    # a convergence certificate that cannot be met maps to exit 3; the
    # Blaschke input has an infinite coefficient tail, so tiny sections
    # at an impossible tolerance must refuse
    cfg = RunConfig(grid_size=256, levels=2, section_start=8, section_cap=16,
                    section_tol=1e-30, check_splits=False)
    cfg_path = _write(tmp_path, "cfg.json", json.dumps(cfg.to_dict()))
    code = main(["inverse", "--family", "blaschke,r=0.8",
                 "--config", cfg_path, "--out", str(tmp_path / "a.json")])
    assert code == 3


def test_family_spec_parsing():
    g = CircleGrid(64)
    R = from_string("monomial,gamma=0.8j,k=2", g)
    assert abs(R.coefficient(-2) - 0.8j) < 1e-15
    with pytest.raises(InputError):
        from_string("nosuch", g)
    with pytest.raises(InputError):
        from_string("monomial,bad=1", g)


def test_config_file_roundtrip(tmp_path):
    cfg = RunConfig(levels=4, grid_size=128)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = RunConfig.from_file(str(path))
    assert back == cfg
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(InputError):
        RunConfig.from_file(str(path))
