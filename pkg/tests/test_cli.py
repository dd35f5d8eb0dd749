"""CLI: config runs, exit codes, determinism, subcommands."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koethe.cli import (
    EXIT_CONFLICT,
    EXIT_FAILS,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_USAGE,
    exit_code_for,
    main,
    read_vector,
    write_vector,
)

L1N = {"kind": "power_series_finite", "alpha": {"form": "power", "p": 1.0}}
L1N2 = {"kind": "power_series_finite", "alpha": {"form": "power", "p": 2.0}}
LINFN = {"kind": "power_series_infinite", "alpha": {"form": "power", "p": 1.0}}
GEO = {"lower": {"form": "geometric", "r": math.exp(-1.0)}}
DELTA = {"lower": {"form": "explicit", "values": [1.0]}}


def base_config(**overrides):
    config = {
        "window": {"n_max": 512, "k_max": 6, "m_max": 16},
        "spaces": {"A": L1N, "B": L1N2, "C": LINFN},
        "symbols": {"geo": GEO, "delta": DELTA},
        "operators": {
            "T": {"variant": "lower", "domain": "A", "codomain": "B",
                  "symbol": "geo"},
        },
        "tasks": [{"command": "certify-compactness", "operator": "T"}],
        "output": {"dir": "out"},
    }
    config.update(overrides)
    return config


def run_config(tmp_path, config, extra_args=()):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return main(["run", "--config", str(path), *extra_args])


# -- exit codes -----------------------------------------------------------------


def test_exit_code_precedence_examples():
    assert exit_code_for([]) == EXIT_OK
    assert exit_code_for(["ok", "ok"]) == EXIT_OK
    assert exit_code_for(["ok", "fails"]) == EXIT_FAILS
    assert exit_code_for(["fails", "inconclusive"]) == EXIT_INCONCLUSIVE
    assert exit_code_for(["conflict", "inconclusive", "fails"]) == EXIT_CONFLICT


@given(st.lists(st.sampled_from(["ok", "fails", "inconclusive", "conflict"]),
                max_size=12))
def test_exit_code_contract(statuses):
    code = exit_code_for(statuses)
    if "conflict" in statuses:
        assert code == EXIT_CONFLICT
    elif "inconclusive" in statuses:
        assert code == EXIT_INCONCLUSIVE
    elif "fails" in statuses:
        assert code == EXIT_FAILS
    else:
        assert code == EXIT_OK


# -- config runs ------------------------------------------------------------------


def test_run_certify_compactness(tmp_path, capsys):
    code = run_config(tmp_path, base_config())
    assert code == EXIT_OK
    report = json.loads(
        (tmp_path / "out" / "task-00-certify-compactness.json").read_text())
    assert report["status"] == "ok"
    assert report["report"]["certificate"]["m"] == 1
    assert report["report"]["theorem_id"] == "lower_to_finite"
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["exit_code"] == 0


def test_run_multiple_tasks_and_csv(tmp_path):
    config = base_config(tasks=[
        {"command": "certify-compactness", "operator": "T"},
        {"command": "cross-validate", "operator": "T",
         "property": "compactness"},
        {"command": "probe", "operator": "T", "k": [1, 2], "m": [1]},
        {"command": "space-check", "space": "B"},
        {"command": "membership", "symbol": "geo", "part": "lower",
         "space": "B", "target": "space"},
        {"command": "tame-condition", "domain": "A", "codomain": "B",
         "direction": "lower", "s_map": {"form": "identity"}},
    ])
    code = run_config(tmp_path, config)
    assert code == EXIT_OK
    out = tmp_path / "out"
    csv_text = (out / "task-02-probe.csv").read_text()
    assert csv_text.splitlines()[0] == "N,k,m,log_ratio"
    assert len(csv_text.splitlines()) > 2
    cross = json.loads((out / "task-01-cross-validate.json").read_text())
    assert cross["report"]["agreement"] == "agree"


def test_run_is_byte_deterministic(tmp_path):
    config = base_config(tasks=[
        {"command": "certify-continuity", "operator": "T"},
        {"command": "probe", "operator": "T", "k": [1], "m": [1, 2]},
        {"command": "tame", "variant": "lower", "domain": "A",
         "codomain": "B", "family": {"count": 3, "seed": 9}},
    ])
    first, second = {}, {}
    for stash, out in ((first, "o1"), (second, "o2")):
        code = run_config(tmp_path, {**config, "output": {"dir": out}})
        assert code == EXIT_OK
        for path in sorted((tmp_path / out).iterdir()):
            stash[path.name] = path.read_bytes()
    assert first == second


def test_run_fails_exit(tmp_path):
    linf_n2 = {"kind": "power_series_infinite",
               "alpha": {"form": "power", "p": 2.0}}
    config = base_config(
        spaces={"C": LINFN, "D": linf_n2},
        operators={"T": {"variant": "lower", "domain": "C", "codomain": "D",
                         "symbol": "delta"}},
        tasks=[{"command": "certify-compactness", "operator": "T"}],
    )
    assert run_config(tmp_path, config) == EXIT_FAILS


def test_run_empty_tasks_rejected(tmp_path):
    assert run_config(tmp_path, base_config(tasks=[])) == EXIT_USAGE


def test_run_unresolved_reference(tmp_path, capsys):
    config = base_config()
    config["operators"]["T"]["domain"] = "missing"
    assert run_config(tmp_path, config) == EXIT_USAGE
    assert "operators.T.domain" in capsys.readouterr().err


def test_run_not_well_defined_full(tmp_path, capsys):
    config = base_config(
        symbols={"s": {"lower": {"form": "explicit", "values": [1.0]},
                       "upper": {"form": "explicit", "values": [1.0]}}},
        operators={"F": {"variant": "full", "domain": "A", "codomain": "C",
                         "symbol": "s"}},
        tasks=[{"command": "certify-continuity", "operator": "F"}],
    )
    assert run_config(tmp_path, config) >= 4
    assert "not well defined" in capsys.readouterr().err


def test_run_bad_window(tmp_path):
    assert run_config(tmp_path, base_config(window={"n_max": -5})) == EXIT_USAGE


def test_run_unknown_command(tmp_path):
    config = base_config(tasks=[{"command": "frobnicate"}])
    assert run_config(tmp_path, config) == EXIT_USAGE


def test_window_overrides(tmp_path):
    config = base_config(tasks=[{"command": "certify-continuity",
                                 "operator": "T"}])
    code = run_config(tmp_path, config, ("--n-max", "256", "--k-max", "3"))
    assert code == EXIT_OK
    report = json.loads(
        (tmp_path / "out" / "task-00-certify-continuity.json").read_text())
    assert report["report"]["window"]["n_max"] == 256
    assert report["report"]["window"]["k_max"] == 3


# -- direct subcommands --------------------------------------------------------------


def test_usage_error_exit_code():
    assert main(["operator", "certify", "--operator"]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE


def test_help_exits_zero():
    assert main(["--help"]) == 0


def test_spaces_check_subcommand(capsys):
    code = main(["spaces", "check", "--space", json.dumps(L1N),
                 "--n-max", "512", "--k-max", "4"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["nuclearity"]["outcome"] == "holds"
    assert payload["report"]["subadditivity"]["m"] == 1
    assert payload["report"]["stability"]["sup_ratio"] == 2.0


def test_spaces_check_failing_nuclearity(capsys):
    space = {"kind": "power_series_finite", "alpha": {"form": "log"}}
    code = main(["spaces", "check", "--space", json.dumps(space),
                 "--checks", "nuclearity"])
    assert code == EXIT_FAILS


def test_symbol_membership_subcommand(capsys):
    code = main(["symbol", "membership", "--symbol", json.dumps(GEO),
                 "--space", json.dumps(L1N2), "--target", "space",
                 "--n-max", "512", "--k-max", "4"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["verdict"]["outcome"] == "holds"


def test_operator_certify_subcommand(capsys):
    op = {"variant": "lower", "domain": L1N, "codomain": L1N2, "symbol": GEO}
    code = main(["operator", "certify", "--operator", json.dumps(op),
                 "--property", "compactness", "--n-max", "512"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["certificate"]["m"] == 1


def test_operator_probe_subcommand_stdout(capsys):
    op = {"variant": "lower", "domain": L1N, "codomain": L1N, "symbol": DELTA}
    code = main(["operator", "probe", "--operator", json.dumps(op),
                 "--k", "2", "--m", "1", "--n-max", "512"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "N,k,m,log_ratio"
    assert lines[-1].startswith("512,2,1,")


def test_operator_apply_subcommand(tmp_path, capsys):
    vec = tmp_path / "x.txt"
    write_vector(vec, [1.0, 2.0, 3.0])
    out = tmp_path / "y.txt"
    op = {"variant": "lower", "domain": L1N, "codomain": L1N, "symbol": DELTA}
    code = main(["operator", "apply", "--operator", json.dumps(op),
                 "--input", str(vec), "--method", "dense", "--out", str(out)])
    assert code == EXIT_OK
    assert read_vector(out).tolist() == [1.0, 2.0, 3.0]


def test_family_tame_subcommand(capsys):
    code = main(["family", "tame", "--variant", "lower",
                 "--domain", json.dumps(L1N), "--codomain", json.dumps(L1N2),
                 "--family", json.dumps({"count": 3, "seed": 1}),
                 "--s-map", json.dumps({"form": "identity"}),
                 "--n-max", "512", "--k-max", "4", "--m-max", "8"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["outcome"] == "holds"
    assert len(payload["report"]["samples"]) == 3


def test_cross_validate_subcommand(capsys):
    op = {"variant": "lower", "domain": L1N, "codomain": L1N2, "symbol": GEO}
    code = main(["cross-validate", "--operator", json.dumps(op),
                 "--property", "compactness", "--n-max", "512"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["report"]["agreement"] == "agree"


def test_inline_json_longer_than_filename_limit(capsys):
    # inline operator JSON easily exceeds the OS filename length cap
    op = {"variant": "lower", "domain": L1N, "codomain": L1N2,
          "symbol": {"lower": {"form": "explicit",
                               "values": [1.0] + [0.0] * 120}}}
    assert len(json.dumps(op)) > 512
    code = main(["operator", "certify", "--operator", json.dumps(op),
                 "--property", "continuity", "--n-max", "256", "--k-max", "3"])
    assert code == EXIT_OK


def test_vector_io_roundtrip(tmp_path):
    path = tmp_path / "v.txt"
    write_vector(path, [0.5, -1.25, 0.0])
    assert read_vector(path).tolist() == [0.5, -1.25, 0.0]
    path.write_text("1.0\n\nnot-a-number\n")
    with pytest.raises(Exception):
        read_vector(path)
