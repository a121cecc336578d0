"""End-to-end tests of the command line, run in an empty working directory."""

import io
import json
import logging

import pytest

from flipchains.cli import (EXIT_FAILED, EXIT_OK, EXIT_USAGE, StderrHandler, _chunks, main,
                            setup_logging)


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("what, n, extra, count", [
    ("labelled", 3, [], 135),
    ("trees", 3, ["--r", "2"], 40),
    ("trees", 0, [], 1),
    ("quad", 2, [], 9),
    ("quad-pointed", 2, [], 36),
    ("signed", 1, [], 6),
])
def test_enumerate_counts(capsys, what, n, extra, count):
    code, out = run(capsys, "enumerate", "--what", what, "--n", str(n), *extra)
    assert code == EXIT_OK
    assert json.loads(out)['count'] == count


def test_enumerate_lists_codes(capsys):
    _, out = run(capsys, "enumerate", "--what", "trees", "--n", "2", "--codes")
    assert sorted(json.loads(out)['codes']) == ["(1(1))", "(1)(1)"]


def test_enumerate_above_the_ceiling(capsys):
    code, _ = run(capsys, "enumerate", "--what", "labelled", "--n", "4", "--ceiling", "100")
    assert code == EXIT_USAGE


def test_convert_round_trip(capsys, monkeypatch):
    code, quad = run(capsys, "convert", "--to", "quad", "(+) +")
    assert code == EXIT_OK
    assert quad.startswith("QM v1 n=1")
    monkeypatch.setattr("sys.stdin", io.StringIO(quad))
    code, back = run(capsys, "convert", "--to", "tree", "-")
    assert code == EXIT_OK
    assert back == "(+) +\n"


def test_convert_sign_override(capsys):
    _, plus = run(capsys, "convert", "--to", "quad", "(+)(-)", "--eps", "1")
    _, minus = run(capsys, "convert", "--to", "quad", "(+)(-)", "--eps", "-1")
    assert plus != minus


def test_convert_rejects_malformed_codes(capsys):
    assert run(capsys, "convert", "--to", "tree", "QM v1 garbage")[0] == EXIT_USAGE
    assert run(capsys, "convert", "--to", "quad", "(+)) +")[0] == EXIT_USAGE
    assert run(capsys, "convert", "--to", "quad", "(+) *")[0] == EXIT_USAGE


def test_bad_arguments_exit_with_usage():
    with pytest.raises(SystemExit) as e:
        main(["simulate", "--chain", "flip", "--n", "0"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["gap", "--chain", "shuffle", "--n", "2"])
    assert e.value.code == EXIT_USAGE


def test_simulate_csv(capsys):
    code, out = run(capsys, "simulate", "--chain", "flip", "--n", "2", "--steps", "5",
                    "--format", "csv", "--seed", "3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "step,radius,root_degree,state"
    assert len(lines) == 7
    assert lines[1].startswith("0,")


def test_simulate_csv_stride(capsys):
    _, out = run(capsys, "simulate", "--chain", "translate", "--n", "3", "--r", "1",
                 "--steps", "10", "--format", "csv", "--every", "4")
    assert [line.split(",")[0] for line in out.splitlines()[1:]] == ["0", "4", "8", "10"]


def test_simulate_is_reproducible(capsys):
    argv = ["simulate", "--chain", "xtilde", "--n", "3", "--steps", "200", "--seed", "5"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_simulate_rejects_a_mismatched_start(capsys):
    _, quad = run(capsys, "convert", "--to", "quad", "(+) +")
    code, _ = run(capsys, "simulate", "--chain", "flip", "--n", "1", "--start", quad.strip())
    assert code == EXIT_USAGE


def test_gap_is_deterministic(capsys):
    argv = ["gap", "--chain", "flip", "--n", "1", "2", "--power"]
    code, first = run(capsys, *argv)
    assert code == EXIT_OK
    assert run(capsys, *argv)[1] == first
    report = json.loads(first)
    assert [g['n'] for g in report['gaps']] == [1, 2]
    assert len(report['slopes']['pairs']) == 1


def test_verify_paths_exhaustive(capsys):
    code, out = run(capsys, "verify-paths", "--what", "flip", "--n", "2", "--exhaustive",
                    "--threads", "2")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report['mode'] == 'exhaustive'
    assert report['trees'] == 18


def test_verify_paths_sampled(capsys):
    code, out = run(capsys, "verify-paths", "--what", "flip", "--n", "6", "--samples", "3",
                    "--families", "root-reversal")
    assert code == EXIT_OK
    assert json.loads(out)['trees'] == 3


def test_verify_paths_replant(capsys):
    code, out = run(capsys, "verify-paths", "--what", "replant", "--n", "2", "--r", "2")
    assert code == EXIT_OK
    assert json.loads(out)['ok']


def test_verify_writes_a_timed_report(capsys, workdir):
    code, out = run(capsys, "verify", "--checks", "cardinalities", "--report", "report.json")
    assert code == EXIT_OK
    assert 'total_time_seconds' not in json.loads(out)['summary']
    saved = json.loads((workdir / "report.json").read_text())
    assert saved['summary']['passed'] == 1
    assert 'total_time_seconds' in saved['summary']


def test_verify_unknown_check(capsys):
    assert run(capsys, "verify", "--checks", "colourings")[0] == EXIT_USAGE


def test_stats_with_law(capsys):
    code, out = run(capsys, "stats", "--what", "quad-pointed", "--n", "2", "--law")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report['states'] == 36
    assert sum(report['histograms']['radius'].values()) == 36
    assert report['law']['pointed']['equal']


def test_stats_law_needs_maps(capsys):
    assert run(capsys, "stats", "--what", "trees", "--n", "2", "--law")[0] == EXIT_USAGE


def test_invalid_user_config(capsys, workdir):
    (workdir / "config").mkdir()
    (workdir / "config" / "config.json").write_text("{not json")
    assert run(capsys, "enumerate", "--n", "1")[0] == EXIT_USAGE


def test_user_config_sets_the_ceiling(capsys, workdir):
    (workdir / "config").mkdir()
    (workdir / "config" / "config.json").write_text(json.dumps({"ceilings": {"states": 40}}))
    assert run(capsys, "enumerate", "--what", "quad", "--n", "3")[0] == EXIT_USAGE
    assert run(capsys, "enumerate", "--what", "quad", "--n", "2")[0] == EXIT_OK


def test_chunks_cover_everything():
    items = list(range(10))
    parts = _chunks(items, 3)
    assert [x for part in parts for x in part] == items
    assert len(parts) == 3
    assert EXIT_FAILED == 1


def test_logging_follows_a_replaced_stderr(monkeypatch):
    first, second = io.StringIO(), io.StringIO()
    monkeypatch.setattr("sys.stderr", first)
    setup_logging("INFO")
    first.close()
    monkeypatch.setattr("sys.stderr", second)
    logging.getLogger("flipchains.cli").warning("written after the swap")
    assert "written after the swap" in second.getvalue()


def test_stderr_handler_ignores_assigned_streams(monkeypatch):
    swapped = io.StringIO()
    monkeypatch.setattr("sys.stderr", swapped)
    handler = StderrHandler()
    handler.setStream(io.StringIO())
    assert handler.stream is swapped
