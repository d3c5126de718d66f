import json

import pytest

from circleops.cli import run

FIVE_CIRCLES = (
    "({w4 {w5 (| (| |)) / (|) | |} / | | |}"
    " {w1 {w2 {w3 (| | |) / (| |) | |} / | | | |} / | | | |})"
)


def out_lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_enumerate_trees_example(capsys):
    assert run(["enumerate", "trees", "--max-vertices", "1",
                "--max-leaves", "2"]) == 0
    assert out_lines(capsys) == ["|", "()", "(|)", "(| |)"]


def test_enumerate_configs_example(capsys):
    assert run(["enumerate", "configs", "--tree", "|", "--k", "2"]) == 0
    lines = out_lines(capsys)
    assert len(lines) == 4
    assert "{w1 {w2 | / |} / |}" in lines


def test_enumerate_kgraph_example(capsys):
    assert run(["enumerate", "kgraph", "--m", "2", "--k", "2"]) == 0
    assert len(out_lines(capsys)) == 4


def test_enumerate_kgraph_inclusive_changes_count(capsys):
    assert run(["--inclusive", "enumerate", "kgraph", "--m", "2", "--k", "2"]) == 0
    assert len(out_lines(capsys)) == 6


def test_records_format_carries_schema(capsys):
    assert run(["--format", "records", "enumerate", "trees",
                "--max-vertices", "1", "--max-leaves", "2"]) == 0
    for line in out_lines(capsys):
        record = json.loads(line)
        assert record["schema"] == 1
        assert record["kind"] == "tree"


def test_compose_config(capsys):
    assert run(["compose", "config",
                "--outer", "{w1 | / {w2 | / |}}",
                "--inner", "{w1 | / |}",
                "--inner", "{w1 {w2 | / |} / |}"]) == 0
    assert out_lines(capsys) == ["{w1 | / {w2 {w3 | / |} / |}}"]


def test_compose_config_arity_mismatch_is_usage_error(capsys):
    assert run(["compose", "config", "--outer", "{w1 | / |}",
                "--inner", "{w1 | / |}", "--inner", "{w1 | / |}"]) == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_compose_kgraph(capsys):
    assert run(["compose", "kgraph",
                "--outer", "2; mu(1,2)=1; perm=[1 2]",
                "--inner", "2; mu(1,2)=0; perm=[2 1]",
                "--inner", "1; ; perm=[1]"]) == 0
    assert out_lines(capsys) == [
        "3; mu(1,2)=0 mu(1,3)=1 mu(2,3)=1; perm=[2 1 3]"
    ]


def test_verify_axioms_passes(capsys):
    assert run(["--seed", "7", "verify", "axioms", "--samples", "25"]) == 0
    lines = out_lines(capsys)
    assert all(line.startswith("ok ") for line in lines)


def test_verify_axioms_without_r3_fails(capsys):
    assert run(["--no-r3", "verify", "axioms", "--samples", "5"]) == 1
    captured = capsys.readouterr()
    assert "FAIL axioms/units-exhaustive" in captured.out
    assert captured.err.startswith("error: ")
    assert captured.err.count("\n") == 1


def test_verify_lemma(capsys):
    assert run(["verify", "lemma", "--tree", "(| |)", "--k", "2"]) == 0
    lines = out_lines(capsys)
    assert len(lines) == 4
    assert all("acyclic=True" in line for line in lines)


def test_verify_remark_linear(capsys):
    assert run(["verify", "remark-linear", "--vertices", "3"]) == 0
    assert all("objects=0" in line for line in out_lines(capsys))


def test_verify_grothendieck_cowedge_proof_structure(capsys):
    assert run(["verify", "grothendieck", "--tree", "|"]) == 0
    assert run(["verify", "cowedge", "--samples", "30"]) == 0
    assert run(["verify", "proof-structure", "--tree", "|"]) == 0
    assert all(line.startswith("ok ") for line in out_lines(capsys))


def test_homology_kposet_example(capsys):
    assert run(["homology", "kposet", "--m", "2", "--k", "2"]) == 0
    assert out_lines(capsys) == ["H0 = Z", "H1 = Z", "H2 = 0", "H3 = 0"]


def test_homology_hat_example(capsys):
    assert run(["homology", "hat", "--tree", "|", "--k", "2"]) == 0
    assert out_lines(capsys) == ["H0 = Z", "H1 = Z", "H2 = 0", "H3 = 0"]


def test_homology_comma_k0_example(capsys):
    assert run(["homology", "comma", "--tree", "|", "--k", "0"]) == 0
    assert out_lines(capsys) == ["H0 = Z", "H1 = 0", "H2 = 0", "H3 = 0"]


def test_homology_below(capsys):
    assert run(["homology", "below", "--tree", "(|)",
                "--cell", "2; mu(1,2)=1; perm=[1 2]"]) == 0
    assert out_lines(capsys)[0] == "H0 = Z"


def test_bad_tree_is_usage_error(capsys):
    assert run(["homology", "comma", "--tree", "((", "--k", "1"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: bad tree")


def test_render_to_stdout_and_check(capsys):
    assert run(["render", "--config", FIVE_CIRCLES, "--check"]) == 0
    svg = capsys.readouterr().out
    assert svg.startswith('<?xml version="1.0"')
    assert svg.count("stroke-dasharray") == 5


def test_render_to_file(tmp_path, capsys):
    out = tmp_path / "drawing.svg"
    assert run(["render", "--config", "{w1 | / |}", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().endswith("</svg>\n")


def test_cached_run_is_byte_identical_to_uncached(tmp_path, capsys):
    args = ["enumerate", "configs", "--tree", "|", "--k", "2"]
    assert run(args) == 0
    plain = capsys.readouterr().out
    assert run(["--cache-dir", str(tmp_path)] + args) == 0
    cold = capsys.readouterr().out
    assert run(["--cache-dir", str(tmp_path)] + args) == 0
    warm = capsys.readouterr().out
    assert plain == cold == warm


def test_cache_key_includes_flags(tmp_path, capsys):
    base = ["--cache-dir", str(tmp_path)]
    assert run(base + ["enumerate", "kgraph", "--m", "2", "--k", "2"]) == 0
    assert run(base + ["--inclusive", "enumerate", "kgraph",
                       "--m", "2", "--k", "2"]) == 0
    capsys.readouterr()
    assert run(base + ["cache", "check"]) == 0
    assert out_lines(capsys) == ["ok 2 entries"]


def test_corrupted_cache_entry_warns_and_recomputes(tmp_path, capsys):
    base = ["--cache-dir", str(tmp_path)]
    args = base + ["homology", "comma", "--tree", "|", "--k", "0"]
    assert run(args) == 0
    first = capsys.readouterr().out
    entry = next(tmp_path.glob("*.json"))
    data = json.loads(entry.read_text())
    data["payload"] = "tampered"
    entry.write_text(json.dumps(data))
    assert run(args) == 0
    captured = capsys.readouterr()
    assert captured.out == first
    assert "hash mismatch" in captured.err and "recomputing" in captured.err


def test_missing_cache_directory_is_an_error(tmp_path, capsys):
    missing = tmp_path / "absent"
    assert run(["--cache-dir", str(missing),
                "enumerate", "trees", "--max-vertices", "1",
                "--max-leaves", "1"]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_cache_env_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CIRCLEOPS_CACHE", str(tmp_path))
    assert run(["cache", "path"]) == 0
    assert out_lines(capsys) == [str(tmp_path)]


def test_cache_requires_a_directory(capsys, monkeypatch):
    monkeypatch.delenv("CIRCLEOPS_CACHE", raising=False)
    assert run(["cache", "path"]) == 2
    assert "no cache directory" in capsys.readouterr().err


def test_cache_clear(tmp_path, capsys):
    base = ["--cache-dir", str(tmp_path)]
    assert run(base + ["enumerate", "trees", "--max-vertices", "1",
                       "--max-leaves", "1"]) == 0
    capsys.readouterr()
    assert run(base + ["cache", "clear"]) == 0
    assert out_lines(capsys) == ["cleared 1 entries"]


def test_usage_error_exit_code(capsys):
    assert run(["enumerate", "nonsense"]) == 2
    assert run([]) == 2


def test_seeded_runs_are_deterministic(capsys):
    args = ["--seed", "11", "--format", "records", "verify", "cowedge",
            "--samples", "20"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
