import json

import numpy as np
import pytest

from opsum import serialize
from opsum.cli import EXIT_OBSTRUCTION, EXIT_OK, EXIT_USAGE, main
from opsum.randmat import random_psd


@pytest.fixture
def workdir(tmp_path):
    serialize.save_matrix(tmp_path / "id2.json", np.eye(2))
    serialize.save_matrix(tmp_path / "neg.json", -np.eye(2))
    serialize.save_pairs(tmp_path / "idpair.json", [(np.eye(2), np.eye(2))])
    (tmp_path / "trunc.json").write_text('{"rows": 2, "cols": 2, "entr')
    (tmp_path / "badfield.json").write_text(
        '{"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0]]}')
    return tmp_path


def test_decompose_identity(workdir, capsys):
    out = workdir / "out.json"
    code = main(["decompose", "--input", str(workdir / "id2.json"),
                 "--output", str(out), "--summands", "4"])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["reconstruction_residual"] <= 1e-7
    assert len(doc["summands"]) == 4
    assert all(c["kind"] in ("positive-semidefinite", "similar-to-positive")
               for c in doc["certificates"])


def test_decompose_obstruction_exit_2(workdir):
    out = workdir / "cert.json"
    code = main(["decompose", "--input", str(workdir / "neg.json"),
                 "--output", str(out), "--summands", "4"])
    assert code == EXIT_OBSTRUCTION
    doc = json.loads(out.read_text())
    assert doc["obstruction"]["reason"] == "nonpositive-real-trace"


def test_decompose_malformed_input_exit_1(workdir, capsys):
    code = main(["decompose", "--input", str(workdir / "trunc.json"),
                 "--output", str(workdir / "x.json")])
    assert code == EXIT_USAGE
    code = main(["decompose", "--input", str(workdir / "badfield.json"),
                 "--output", str(workdir / "x.json")])
    assert code == EXIT_USAGE
    assert "entries" in capsys.readouterr().err


def test_decompose_missing_file(workdir):
    code = main(["decompose", "--input", str(workdir / "nope.json"),
                 "--output", str(workdir / "x.json")])
    assert code == EXIT_USAGE


@pytest.mark.parametrize("m", [2, 3])
def test_decompose_other_summand_counts(workdir, m):
    out = workdir / f"out{m}.json"
    code = main(["decompose", "--input", str(workdir / "id2.json"),
                 "--output", str(out), "--summands", str(m), "--seed", "1"])
    assert code == EXIT_OK
    assert len(json.loads(out.read_text())["summands"]) == m


def test_spectrum_identity(workdir):
    out = workdir / "spec.json"
    code = main(["spectrum", "--input", str(workdir / "idpair.json"),
                 "--output", str(out)])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["is_real_nonnegative"] is True
    assert doc["is_luders"] is True
    assert doc["eigenvalues"] == [[1.0, 0.0]] * 4


def test_spectrum_luders_contained(workdir, rng):
    pairs = [(P, P) for P in (random_psd(rng, 3), random_psd(rng, 3))]
    serialize.save_pairs(workdir / "lud.json", pairs)
    out = workdir / "spec2.json"
    assert main(["spectrum", "--input", str(workdir / "lud.json"),
                 "--output", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["is_real_nonnegative"] is True


def test_spectrum_non_psd_reports_distance(workdir):
    rot = np.array([[0.0, 1.0], [-1.0, 0.0]])   # eigenvalues +-i
    serialize.save_pairs(workdir / "rot.json", [(rot, np.eye(2))])
    out = workdir / "spec3.json"
    assert main(["spectrum", "--input", str(workdir / "rot.json"),
                 "--output", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["is_real_nonnegative"] is False
    assert doc["max_dist_to_rplus"] == pytest.approx(1.0)


def test_spectrum_shape_mismatch_exit_1(workdir):
    (workdir / "mismatch.json").write_text(json.dumps({"pairs": [{
        "A": {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0], [1, 0]]},
        "B": {"rows": 1, "cols": 1, "entries": [[1, 0]]},
    }]}))
    assert main(["spectrum", "--input", str(workdir / "mismatch.json"),
                 "--output", str(workdir / "x.json")]) == EXIT_USAGE


def test_luders_demo_positive(workdir):
    out = workdir / "demo.json"
    code = main(["luders-demo", "--lambda", "2", "--output", str(out), "--k", "2"])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["eigen_residual"] <= 1e-10
    assert doc["lambda"] == [2.0, 0.0]


def test_luders_demo_rejection_carries_bound(workdir, capsys):
    code = main(["luders-demo", "--lambda=-1", "--output", str(workdir / "d.json")])
    assert code == EXIT_OBSTRUCTION
    err = capsys.readouterr().err
    assert "lower bound 1" in err


def test_optimize_writes_trace(workdir):
    out = workdir / "opt.csv"
    code = main(["optimize", "--input", str(workdir / "id2.json"),
                 "--output", str(out), "--m", "1",
                 "--restarts", "2", "--iterations", "60"])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "iteration,residual"
    residuals = [float(l.split(",")[1]) for l in lines[1:]]
    assert all(b <= a + 1e-15 for a, b in zip(residuals, residuals[1:]))
    summary = json.loads((workdir / "opt.csv.json").read_text())
    assert summary["best_residual"] <= 1e-8


def test_study_deterministic(workdir):
    a, b = workdir / "s1.csv", workdir / "s2.csv"
    args = ["study", "--sizes", "2", "--margins", "1,0.1", "--trials", "2",
            "--seed", "5"]
    assert main(args + ["--output", str(a)]) == EXIT_OK
    assert main(args + ["--output", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == "n,trace_margin,trial,max_cond_S,residual,success"


def test_pseudospectrum_csv(workdir):
    out = workdir / "ps.csv"
    code = main(["pseudospectrum", "--input", str(workdir / "idpair.json"),
                 "--output", str(out), "--grid=-1,2,-1,1,4"])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "re,im,sigma_min"
    assert len(lines) == 1 + 16


def test_usage_errors_exit_1(workdir):
    assert main(["decompose"]) == EXIT_USAGE                    # missing flags
    assert main(["nosuchcommand"]) == EXIT_USAGE
    assert main(["pseudospectrum", "--input", str(workdir / "idpair.json"),
                 "--output", str(workdir / "x.csv"), "--grid", "1,2,3"]) == EXIT_USAGE
    assert main(["luders-demo", "--lambda", "frog",
                 "--output", str(workdir / "x.json")]) == EXIT_USAGE
