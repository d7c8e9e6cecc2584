"""Figure-script tests: driven entirely through the public interfaces (the
``cpsphere`` CLI for data, the scripts' command lines for rendering)."""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

FIG_DIR = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(FIG_DIR))

from csv_contract import ContractError, load_sweep_csv  # noqa: E402
import fig3  # noqa: E402
import fig4  # noqa: E402

CONFIG_TEMPLATE = """
units: reduced
atom:
  electric_transitions:
    - {{omega: 1.0, strength: 1.5}}
partner:
  kind: sphere
  radius: 0.015
  cavity_radius: 0.015
  eps:
    model: lorentz
    oscillators:
      - {{omega_t: 1.0, omega_p: 6.0, gamma: 0.001}}
  mu: {{model: vacuum}}
host:
  eps:
    model: lorentz
    oscillators:
      - {{omega_t: 1.03, omega_p: 0.1, gamma: 0.001}}
  mu: {{model: vacuum}}
scenario:
  separation: {separation}
  channels: [ee]
sweep:
  parameter: {parameter}
  from: {start}
  to: {stop}
  steps: 10
  spacing: log
"""


def run_cli(args):
    return subprocess.run(args, capture_output=True, text=True)


def make_qsweep(tmp_path, separation):
    cfg = tmp_path / f"q_{separation}.yaml"
    cfg.write_text(CONFIG_TEMPLATE.format(separation=separation,
                                          parameter="q", start=0.2, stop=1.0))
    out = tmp_path / f"q_{separation}.csv"
    proc = run_cli(["cpsphere", "sweep", "--config", str(cfg),
                    "--output", str(out)])
    assert proc.returncode == 0, proc.stderr
    return out


def make_rsweep(tmp_path, q):
    cfg = tmp_path / f"r_{q}.yaml"
    body = CONFIG_TEMPLATE.format(separation=1.0, parameter="r_AS",
                                  start=0.5, stop=20.0)
    body = body.replace("radius: 0.015", f"radius: {0.015 * q}", 1)
    cfg.write_text(body)
    out = tmp_path / f"r_{q}.csv"
    proc = run_cli(["cpsphere", "sweep", "--config", str(cfg),
                    "--output", str(out)])
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="module")
def qsweeps(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("qsweeps")
    return [make_qsweep(tmp, sep) for sep in (1.0, 3.0, 10.0)]


@pytest.fixture(scope="module")
def rsweeps(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("rsweeps")
    return [make_rsweep(tmp, q) for q in (0.25, 0.5, 1.0)]


def script(name):
    return [sys.executable, str(FIG_DIR / name)]


class TestSizeSweepFigure:
    def test_renders_three_labelled_curves(self, qsweeps, tmp_path):
        out = tmp_path / "fig3.png"
        proc = run_cli(script("fig3.py") + ["--csv"]
                       + [str(p) for p in qsweeps] + ["--out", str(out)])
        assert proc.returncode == 0, proc.stderr
        assert out.exists() and out.stat().st_size > 5000

        series = fig3.load_series([str(p) for p in qsweeps])
        assert [label for label, _, _ in series] == [1.0, 3.0, 10.0]

    def test_curves_ordered_by_separation(self, qsweeps):
        # farther atom, weaker attraction, at every q
        series = fig3.load_series([str(p) for p in qsweeps])
        for (_, q_a, u_a), (_, q_b, u_b) in zip(series, series[1:]):
            assert np.allclose(q_a, q_b)
            assert np.all(np.abs(u_b) < np.abs(u_a))

    def test_deterministic_output(self, qsweeps, tmp_path):
        outs = []
        for name in ("one.png", "two.png"):
            out = tmp_path / name
            proc = run_cli(script("fig3.py") + ["--csv"]
                           + [str(p) for p in qsweeps] + ["--out", str(out)])
            assert proc.returncode == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_missing_columns_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# cpsphere test\nr_AS,q\n1.0,0.5\n")
        proc = run_cli(script("fig3.py")
                       + ["--csv", str(bad), "--out", str(tmp_path / "x.png")])
        assert proc.returncode != 0
        assert "missing columns" in proc.stderr

    def test_empty_csv_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        proc = run_cli(script("fig3.py")
                       + ["--csv", str(empty), "--out", str(tmp_path / "x.png")])
        assert proc.returncode != 0


class TestSeparationSweepFigure:
    def test_renders(self, rsweeps, tmp_path):
        out = tmp_path / "fig4.png"
        proc = run_cli(script("fig4.py") + ["--csv"]
                       + [str(p) for p in rsweeps] + ["--out", str(out)])
        assert proc.returncode == 0, proc.stderr
        assert out.exists() and out.stat().st_size > 5000

    def test_magnitude_decreasing_and_ordered_in_q(self, rsweeps):
        series = fig4.load_series([str(p) for p in rsweeps])
        assert [label for label, _, _ in series] == [0.25, 0.5, 1.0]
        for _, separation, u in series:
            assert np.all(np.diff(np.abs(u)) < 0.0)
        # bigger sphere, stronger attraction at every separation
        for (_, _, u_a), (_, _, u_b) in zip(series, series[1:]):
            assert np.all(np.abs(u_b) > np.abs(u_a))

    def test_deterministic_output(self, rsweeps, tmp_path):
        outs = []
        for name in ("one.png", "two.png"):
            out = tmp_path / name
            proc = run_cli(script("fig4.py") + ["--csv"]
                           + [str(p) for p in rsweeps] + ["--out", str(out)])
            assert proc.returncode == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_malformed_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("r_AS,q,R_C,U_ee,U_em,U_me,U_mm,U_total,quad_error_max\n"
                       "1.0,0.5,0.02,nan,0,0,0,oops,0\n")
        proc = run_cli(script("fig4.py")
                       + ["--csv", str(bad), "--out", str(tmp_path / "x.png")])
        assert proc.returncode != 0


class TestContract:
    def test_loader_requires_constant_label_column(self, qsweeps):
        sweep = load_sweep_csv(str(qsweeps[0]))
        with pytest.raises(ContractError):
            # q varies across a q-sweep, so it cannot serve as the label
            from csv_contract import constant_column_value
            constant_column_value(sweep, "q")
