"""End-to-end tests of the command-line interface.

Each test drives kessence.cli.main in-process and inspects the files it
writes: headers, frozen cell strings, summaries, exit codes, and the
byte-for-byte determinism contract.
"""

import filecmp
import json
import math
import os

import pytest

from kessence.cli import _fmt, main
from kessence.model import (
    KineticModel,
    classify_regime,
    eos_w,
    eval_F,
    eval_F_X,
    sound_speed,
    sound_speed_perturbed,
    w_perturbed_exact,
)

EOS_HEADER = ("X,F,F_X,w_exact,cs2_exact,w_perturbed_eq14,"
              "cs2_perturbed_eq11,regime,note")
PROFILE_HEADER = "x,phi,dphi_dx,X_mag"
SHARPNESS_HEADER = "b,L,peak_value,peak_position,half_width,integral"
TRAJECTORY_HEADER = "t,a,phi,phidot,X,w,cs2,Q"
REGIMES_HEADER = ("b,L,X_estimate,eps0,F2,w_exact,w_paper,"
                  "cs2_exact,cs2_paper,regime_label")

BASE_DOC = {
    "model": {"F2": 1000.0, "X0": 1000.0, "eps0": 0.01, "F0": -1.0},
    "potential": {"kind": "constant", "V0": 1.0},
    "background": {"kind": "desitter", "H": 1.0},
}


def _write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _rows(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    assert text.endswith("\n")
    return text.splitlines()


def _run(args):
    return main(list(args))


# ---------------------------------------------------------------------------
# eos-scan
# ---------------------------------------------------------------------------

def test_eos_scan_anchor_rows(tmp_path):
    doc = dict(BASE_DOC)
    doc["scan"] = {"X": {"min": 1000.0, "max": 2000.0, "count": 101}}
    doc["output"] = {"directory": "out", "stem": "eos"}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["eos-scan", "--config", cfg, "--out", str(out), "--quiet"]) == 0

    rows = _rows(out / "eos_eos_scan.csv")
    assert rows[0] == EOS_HEADER
    assert len(rows) == 102

    first = rows[1].split(",")
    # X = X0: w = -1 and cs2 = 0 exactly; perturbed cs2 undefined
    assert first[0] == "1000.0"
    assert first[3] == "-1.0"
    assert first[4] == "0.0"
    assert first[5] == "-1.0"
    assert first[6] == "NAN"
    assert first[7] == "CosmologicalConstant"
    assert "perturbed cs2 undefined at eps0 = 0" in first[8]

    last = rows[-1].split(",")
    # X = 2 X0: cs2 = (X - X0)/(3X - X0) = 1/5
    assert last[0] == "2000.0"
    assert last[4] == "0.2"

    summary = _rows(out / "eos_eos_scan_summary.txt")
    assert summary[0] == "eos-scan summary"
    assert "points: 101" in summary
    assert "table: eos_eos_scan.csv" in summary


def test_eos_scan_pole_and_below_extremum_rows(tmp_path):
    doc = dict(BASE_DOC)
    doc["model"] = {"F2": 1.0, "X0": 3.0}
    doc["scan"] = {"X": {"min": 0.5, "max": 1.5, "count": 3}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["eos-scan", "--config", cfg, "--out", str(out), "--quiet"]) == 0

    rows = _rows(out / "run_eos_scan.csv")
    cells = [r.split(",") for r in rows[1:]]
    # the middle row sits exactly on the cs2 pole X = X0/3 = 1
    assert cells[1][0] == "1.0"
    assert cells[1][4] == "NAN"
    assert "pole at X = X0/3" in cells[1][8]
    # all three rows are below X0, so the perturbed columns are absent
    for c in cells:
        assert c[5] == "NAN" and c[6] == "NAN"
        assert "X < X0" in c[8]


def test_eos_scan_spot_check_against_library(tmp_path, rng):
    doc = dict(BASE_DOC)
    doc["scan"] = {"X": {"min": 800.0, "max": 2000.0, "count": 301}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["eos-scan", "--config", cfg, "--out", str(out), "--quiet"]) == 0

    rows = _rows(out / "run_eos_scan.csv")[1:]
    assert len(rows) == 301
    m = KineticModel(F2=1000.0, X0=1000.0, eps0=0.01, F0=-1.0)
    picks = rng.choice(len(rows), size=100, replace=False)
    for i in picks:
        cells = rows[i].split(",")
        X = float(cells[0])
        assert cells[1] == _fmt(eval_F(m, X))
        assert cells[2] == _fmt(eval_F_X(m, X))
        w_e = float(eos_w(m, X))
        assert cells[3] == _fmt(w_e)
        cs2_e = float(sound_speed(m, X))
        assert cells[4] == _fmt(cs2_e)
        eps = X - m.X0
        if eps > 0.0:
            pm = KineticModel(F2=m.F2, X0=m.X0, eps0=eps, F0=m.F0)
            assert cells[5] == _fmt(w_perturbed_exact(pm))
            assert cells[6] == _fmt(sound_speed_perturbed(pm))
        elif eps == 0.0:
            assert cells[5] == "-1.0" and cells[6] == "NAN"
        else:
            assert cells[5] == "NAN" and cells[6] == "NAN"
        assert cells[7] == classify_regime(w_e, cs2_e).label.value


def test_eos_scan_needs_scan_range(tmp_path):
    cfg = _write(tmp_path, dict(BASE_DOC))
    assert _run(["eos-scan", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2


# ---------------------------------------------------------------------------
# wall
# ---------------------------------------------------------------------------

def test_wall_figure2_trio(tmp_path):
    out = tmp_path / "o"
    assert _run(["wall", "--preset", "figure2", "--out", str(out),
                 "--quiet"]) == 0
    for L in (3, 6, 9):
        rows = _rows(out / f"figure2_profile_b10_L{L}.csv")
        assert rows[0] == PROFILE_HEADER
        assert len(rows) == 400 * L + 2  # grid [-2L, 2L] at spacing 1/100

    rows = _rows(out / "figure2_sharpness.csv")
    assert rows[0] == SHARPNESS_HEADER
    cells = [r.split(",") for r in rows[1:]]
    assert [c[3] for c in cells] == ["1.5", "3.0", "4.5"]
    for c in cells:
        assert float(c[2]) == pytest.approx(50.0 * math.pi ** 2, rel=1e-9)
        assert float(c[4]) == pytest.approx(
            2.0 * math.acosh(2.0 ** 0.25) / 10.0, rel=1e-2)

    summary = _rows(out / "figure2_wall_summary.txt")
    assert summary[0] == "wall summary"
    assert "combinations: 3" in summary
    assert "sharpness table: figure2_sharpness.csv" in summary


def test_wall_figure1_peak_scaling(tmp_path):
    out = tmp_path / "o"
    assert _run(["wall", "--preset", "figure1", "--out", str(out),
                 "--quiet"]) == 0
    cells = [r.split(",") for r in _rows(out / "figure1_sharpness.csv")[1:]]
    assert [c[0] for c in cells] == ["3.0", "10.0"]
    peak3, peak10 = float(cells[0][2]), float(cells[1][2])
    assert peak3 == pytest.approx(44.41321980490211, rel=1e-9)
    assert peak10 / peak3 == pytest.approx((10.0 / 3.0) ** 2, rel=1e-9)


def test_wall_doubling_ratio(tmp_path):
    doc = dict(BASE_DOC)
    doc["wall"] = {"b": 5.0, "L": 9.0}
    doc["scan"] = {"b": {"min": 5.0, "max": 10.0, "count": 2}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["wall", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    cells = [r.split(",") for r in _rows(out / "run_sharpness.csv")[1:]]
    peak5, peak10 = float(cells[0][2]), float(cells[1][2])
    w5, w10 = float(cells[0][4]), float(cells[1][4])
    i5, i10 = float(cells[0][5]), float(cells[1][5])
    assert peak10 / peak5 == pytest.approx(4.0, rel=1e-2)
    assert w5 / w10 == pytest.approx(2.0, rel=2e-2)
    assert i10 / i5 == pytest.approx(2.0, rel=1e-2)


def test_wall_needs_wall_block(tmp_path):
    cfg = _write(tmp_path, dict(BASE_DOC))
    assert _run(["wall", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def test_evolve_paper_point(tmp_path):
    out = tmp_path / "o"
    assert _run(["evolve", "--preset", "paper-point", "--out", str(out),
                 "--quiet"]) == 0
    rows = _rows(out / "paper_point_trajectory.csv")
    assert rows[0] == TRAJECTORY_HEADER
    assert len(rows) == 202
    first = rows[1].split(",")
    assert first[0] == "0.0" and first[1] == "1.0"
    # X(0) is the float round trip of 0.5 * sqrt(2 * 1050)^2
    assert first[4] == "1049.9999999999998"

    summary = _rows(out / "paper_point_evolve_summary.txt")
    assert "mode: kinetic_only" in summary
    assert "slope check: PASS (expected -3.0 +- 0.01)" in summary
    assert "conservation: PASS" in summary
    assert any(s.startswith("fitted eps1 = ") for s in summary)


def test_evolve_equilibrium_cells_exact(tmp_path):
    doc = dict(BASE_DOC)
    doc["model"] = {"F2": 1000.0, "X0": 800.0}
    doc["evolve"] = {"t_end": 2.0, "phidot": 40.0}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["evolve", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    rows = _rows(out / "run_trajectory.csv")
    for row in rows[1:]:
        cells = row.split(",")
        assert cells[4] == "800.0"
        assert cells[5] == "-1.0"
        assert cells[6] == "0.0"
        assert cells[7] == "0.0"
    summary = _rows(out / "run_evolve_summary.txt")
    assert "max absolute Q drift = 0.0 (Q(0) = 0)" in summary
    assert "conservation: PASS" in summary
    assert any(s.startswith("scaling fit not available") for s in summary)
    assert any(s.startswith("slope not available") for s in summary)


def test_evolve_reports_drift_failure(tmp_path):
    doc = dict(BASE_DOC)
    doc["evolve"] = {"t_end": 3.0, "X": 1050.0,
                     "rel_tol": 1e-12, "abs_tol": 1.0}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["evolve", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    summary = _rows(out / "run_evolve_summary.txt")
    assert "drift bound (100 * rel_tol) = 1e-10" in summary
    assert "conservation: FAILED" in summary


def test_evolve_full_quadratic_notes_varying_potential(tmp_path):
    cfg = os.path.join(os.path.dirname(__file__), os.pardir, "configs",
                       "evolve_full_quadratic.json")
    out = tmp_path / "o"
    assert _run(["evolve", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    summary = _rows(out / "evolve_quad_evolve_summary.txt")
    assert "mode: full" in summary
    assert any("Q is a first integral of the constant-V equation only"
               in s for s in summary)


def test_evolve_needs_evolve_block(tmp_path):
    cfg = _write(tmp_path, dict(BASE_DOC))
    assert _run(["evolve", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2


# ---------------------------------------------------------------------------
# regimes
# ---------------------------------------------------------------------------

def test_regimes_paper_point_frozen_row(tmp_path):
    out = tmp_path / "o"
    assert _run(["regimes", "--preset", "paper-point", "--out", str(out),
                 "--quiet"]) == 0
    rows = _rows(out / "paper_point_regimes.csv")
    assert rows[0] == REGIMES_HEADER
    assert len(rows) == 2
    assert rows[1] == ("NAN,NAN,1000.0,0.01,1000.0,"
                       "-2.249926877376485e-05,-1.0416666666666667,"
                       "4.999925001124983e-06,4.99989997700096e-09,"
                       "CosmologicalConstant")

    report = _rows(out / "paper_point_discrepancy.txt")
    assert report[0] == "regime discrepancy report"
    assert "max |w_exact - w_paper| = 1.041644167397893" in report
    assert ("  exact columns classify as DarkMatterLike; "
            "approx columns as CosmologicalConstant") in report
    assert "  w discrepancy exceeds 0.9: yes" in report


def test_regimes_b_indexed_rows(tmp_path):
    doc = dict(BASE_DOC)
    doc["scan"] = {"b": {"min": 3.0, "max": 10.0, "count": 2},
                   "L": {"min": 9.0, "max": 9.0, "count": 1},
                   "eps0": {"min": 0.01, "max": 0.01, "count": 1},
                   "F2": {"min": 1000.0, "max": 1000.0, "count": 1}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["regimes", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    rows = _rows(out / "run_regimes.csv")
    assert len(rows) == 3
    c3 = rows[1].split(",")
    c10 = rows[2].split(",")
    # X_estimate is the kinetic spike height of the wall, (1/2)(pi b)^2
    assert c3[:3] == ["3.0", "9.0", "44.41321980490211"]
    assert c10[:3] == ["10.0", "9.0", "493.4802200544679"]
    assert c10[-1] == "CosmologicalConstant"


@pytest.mark.parametrize("b", [10.0, 11.0, 12.0, 13.0])
def test_regimes_steep_walls_classify_as_constant(tmp_path, b):
    # at the reference eps0 = 1e-2, F2 = 1e3 the steep-wall rows sit well
    # inside the CosmologicalConstant window (it closes around b ~ 15)
    doc = dict(BASE_DOC)
    doc["scan"] = {"b": {"min": b, "max": b, "count": 1},
                   "L": {"min": 9.0, "max": 9.0, "count": 1},
                   "eps0": {"min": 0.001, "max": 0.01, "count": 3},
                   "F2": {"min": 1000.0, "max": 1000.0, "count": 1}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["regimes", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    for row in _rows(out / "run_regimes.csv")[1:]:
        assert row.split(",")[-1] == "CosmologicalConstant"


def test_regimes_zero_eps0_row(tmp_path):
    doc = dict(BASE_DOC)
    doc["scan"] = {"X0": {"min": 50.0, "max": 50.0, "count": 1},
                   "eps0": {"min": 0.0, "max": 0.0, "count": 1},
                   "F2": {"min": 10.0, "max": 10.0, "count": 1}}
    cfg = _write(tmp_path, doc)
    out = tmp_path / "o"
    assert _run(["regimes", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    rows = _rows(out / "run_regimes.csv")
    assert rows[1] == "NAN,NAN,50.0,0.0,10.0,-1.0,-1.0,NAN,NAN,Unclassified"


def test_regimes_requires_ranges(tmp_path):
    doc = dict(BASE_DOC)
    doc["scan"] = {"eps0": {"min": 0.01, "max": 0.01, "count": 1}}
    cfg = _write(tmp_path, doc)
    assert _run(["regimes", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2
    # b-indexed scans need an L source
    doc["scan"] = {"b": {"min": 5.0, "max": 5.0, "count": 1},
                   "eps0": {"min": 0.01, "max": 0.01, "count": 1},
                   "F2": {"min": 10.0, "max": 10.0, "count": 1}}
    cfg = _write(tmp_path, doc)
    assert _run(["regimes", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("command,preset", [
    ("eos-scan", None),
    ("wall", "figure2"),
    ("evolve", "paper-point"),
    ("regimes", "paper-point"),
])
def test_byte_identical_reruns(tmp_path, command, preset):
    if preset is None:
        doc = dict(BASE_DOC)
        doc["scan"] = {"X": {"min": 900.0, "max": 1400.0, "count": 64}}
        source = ["--config", _write(tmp_path, doc)]
    else:
        source = ["--preset", preset]
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    assert _run([command, *source, "--out", str(d1), "--quiet"]) == 0
    assert _run([command, *source, "--out", str(d2), "--quiet"]) == 0
    names = sorted(os.listdir(d1))
    assert names == sorted(os.listdir(d2))
    for name in names:
        assert filecmp.cmp(d1 / name, d2 / name, shallow=False), name


# ---------------------------------------------------------------------------
# exit codes, flags, dispatch
# ---------------------------------------------------------------------------

def test_exit_code_unknown_key(tmp_path):
    doc = dict(BASE_DOC)
    doc["turbo"] = True
    cfg = _write(tmp_path, doc)
    assert _run(["eos-scan", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 2


def test_exit_code_missing_config(tmp_path):
    assert _run(["eos-scan", "--config", str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "o"), "--quiet"]) == 2


def test_exit_code_numeric_failure(tmp_path):
    doc = dict(BASE_DOC)
    doc["model"] = {"F2": 10.0, "X0": 3.0}
    doc["evolve"] = {"t_end": 1.0, "X": 1.0}  # X0/3: singular coefficient
    cfg = _write(tmp_path, doc)
    assert _run(["evolve", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--quiet"]) == 3


def test_exit_code_io_failure(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("not a directory", encoding="utf-8")
    assert _run(["evolve", "--preset", "paper-point", "--out", str(blocker),
                 "--quiet"]) == 4


def test_usage_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _run(["evolve", "--preset", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        _run(["evolve"])  # --config / --preset required
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        _run([])  # a command is required
    assert exc.value.code == 2
    cfg = _write(tmp_path, dict(BASE_DOC))
    with pytest.raises(SystemExit) as exc:
        _run(["evolve", "--config", cfg, "--preset", "figure1"])
    assert exc.value.code == 2


def test_quiet_suppresses_progress(tmp_path, capsys):
    out = tmp_path / "o"
    assert _run(["regimes", "--preset", "paper-point", "--out", str(out)]) == 0
    chatter = capsys.readouterr()
    assert "wrote" in chatter.out
    assert _run(["regimes", "--preset", "paper-point", "--out", str(out),
                 "--quiet"]) == 0
    silent = capsys.readouterr()
    assert silent.out == ""


def test_out_flag_overrides_config_directory(tmp_path, monkeypatch):
    doc = dict(BASE_DOC)
    doc["scan"] = {"X": {"min": 900.0, "max": 1100.0, "count": 5}}
    doc["output"] = {"directory": "from_config", "stem": "t"}
    cfg = _write(tmp_path, doc)
    monkeypatch.chdir(tmp_path)

    assert _run(["eos-scan", "--config", cfg, "--quiet"]) == 0
    assert (tmp_path / "from_config" / "t_eos_scan.csv").exists()

    assert _run(["eos-scan", "--config", cfg, "--out", str(tmp_path / "elsewhere"),
                 "--quiet"]) == 0
    assert (tmp_path / "elsewhere" / "t_eos_scan.csv").exists()
