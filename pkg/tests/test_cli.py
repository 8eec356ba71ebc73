from __future__ import annotations

from randomplayer.cli import main
from randomplayer.montecarlo import CSV_HEADER, csv_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trials_happy_path(capsys):
    code, out, _ = run(capsys, "trials", "--game", "ham", "--n", "100", "--b", "40", "--eps", "0.2",
                       "--trials", "20", "--seed", "7", "--workers", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# randomplayer") and lines[1] == CSV_HEADER
    row = dict(zip(CSV_HEADER.split(","), lines[2].split(",")))
    assert row["n"] == "100" and row["bias"] == "40" and row["trials"] == "20"


def test_zero_n_is_a_usage_error(capsys):
    code, _, err = run(capsys, "trials", "--game", "ham", "--n", "0", "--b", "4")
    assert code == 2 and "--n" in err


def test_missing_bias_is_a_usage_error(capsys):
    code, _, err = run(capsys, "trials", "--game", "ham", "--n", "30")
    assert code == 2 and "--b" in err


def test_check_p5_is_not_hamiltonian(tmp_path, capsys):
    f = tmp_path / "g.edges"
    f.write_text("0 1\n1 2\n2 3\n3 4\n")
    code, out, _ = run(capsys, "check", "--input", str(f), "--property", "hamiltonian")
    assert code == 0
    assert "verdict: No" in out.splitlines()


def test_check_reads_board_edge_lists(tmp_path, capsys):
    f = tmp_path / "g.edges"
    f.write_text("board complete 4\n0 1 M\n1 2 M\n2 3 M\n0 3 M\n0 2 B\n1 3 F\n")
    code, out, _ = run(capsys, "check", "--input", str(f), "--property", "hamiltonian")
    assert code == 0 and "verdict: Yes" in out
    code, out, _ = run(capsys, "check", "--input", str(f), "--property", "k_connected", "--k", "3")
    assert "verdict: No" in out


def test_check_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "check", "--input", str(tmp_path / "none"), "--property", "hamiltonian")
    assert code == 2 and "--input" in err


def test_empty_table_is_header_only():
    lines = csv_table([]).splitlines()
    assert lines[0].startswith("#") and lines[1:] == [CSV_HEADER]


def test_pipeline_rows_follow_phase_order(capsys):
    code, out, _ = run(capsys, "pipeline", "--n", "12", "--m", "3", "--breaker", "random", "--R", "1",
                       "--seed", "2")
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    i = body.index("phase,achieved,round,verdict")
    assert [ln.split(",")[0] for ln in body[i + 1:i + 4]] == ["Expander", "Connected", "Hamiltonian"]


def test_identical_argv_gives_identical_stdout(capsys):
    argv = ["trials", "--game", "pm", "--board", "bipartite", "--n", "40", "--b", "20", "--alpha", "0.6",
            "--trials", "6", "--seed", "3", "--workers", "1"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_sweep_prints_one_row_per_point(capsys):
    code, out, _ = run(capsys, "sweep", "--game", "ham", "--n", "40", "--b", "4", "--trials", "3",
                       "--grid", "b=5,10", "--workers", "1")
    assert code == 0
    assert len([ln for ln in out.splitlines() if ln and not ln.startswith("#")]) == 3


def test_box_command(capsys):
    code, out, _ = run(capsys, "box", "--boxes", "20", "--size", "10", "--bias", "3", "--trials", "10")
    assert code == 0 and out


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--dist", "binomial", "--n", "200", "--p", "0.5",
                       "--direction", "lower", "--a", "0.5")
    assert code == 0
    assert "mu: 100" in out and "bound: 3.726653e-06" in out


def test_bounds_rejects_upper_a_of_one(capsys):
    code, _, err = run(capsys, "bounds", "--dist", "binomial", "--n", "20", "--p", "0.5",
                       "--direction", "upper", "--a", "1")
    assert code == 2


def test_play_isolation(capsys):
    code, out, _ = run(capsys, "play", "--game", "isolate", "--n", "30", "--m", "1", "--seed", "4")
    assert code == 0 and "Breaker" in out


def test_all_forfeit_batch_exits_one(capsys):
    # any two edges of a triangle touch every vertex, so Breaker has nothing to isolate
    code, _, err = run(capsys, "trials", "--game", "isolate", "--n", "3", "--m", "2", "--move-order",
                       "MakerFirst", "--trials", "3", "--workers", "1")
    assert code == 1 and "forfeit" in err
