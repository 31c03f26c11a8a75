import json
import subprocess
import sys
from pathlib import Path

import pytest

from hsgkit.cli import main
from hsgkit.document import make_document
from hsgkit.grid import grid_to_body
from hsgkit.neuro.world import self_loop_body
from hsgkit.suites import definability_grid

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def hsg(capsys):
    def call(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return call


@pytest.fixture
def files(tmp_path):
    world = tmp_path / "world.json"
    world.write_text(make_document("world", self_loop_body(), "loop"))
    grid = tmp_path / "grid.json"
    grid.write_text(make_document("grid", grid_to_body(definability_grid()), "g"))
    pkg = tmp_path / "pkg.json"
    pkg.write_text(make_document("package", {"id": "hsg0", "dependencies": ["ces"], "symbols": [{"symbol": "Def", "arity": 1}]}))
    clash = tmp_path / "clash.json"
    clash.write_text(make_document("package", {"id": "bad", "dependencies": ["ces"], "symbols": [{"symbol": "E", "arity": 2}]}))
    return tmp_path


def test_registry_flow(hsg, files):
    store = files / "reg.json"
    assert hsg("registry", "init", "--store", store)[0] == 0
    assert store.read_bytes() == (GOLDEN / "init_registry.json").read_bytes()
    assert hsg("registry", "init", "--store", store)[0] == 3
    assert hsg("registry", "attach", files / "pkg.json", "--store", store)[0] == 0
    assert hsg("registry", "attach", files / "clash.json", "--store", store)[0] == 3
    code, out, _ = hsg("registry", "order", "--store", store)
    assert code == 0 and json.loads(out) == {"order": ["ces", "hsg0"]}
    assert hsg("registry", "detach", "ces", "--store", store)[0] == 3
    att = files / "att.json"
    assert hsg("registry", "attest", "--store", store, "--instance", "n1", "--counter", 3, "--out", att)[0] == 0
    code, out, _ = hsg("registry", "verify", att, "--store", store)
    assert code == 0 and json.loads(out) == {"verified": True}
    assert hsg("registry", "detach", "hsg0", "--store", store)[0] == 0
    assert hsg("registry", "verify", att, "--store", store)[0] == 2


def test_sim_run_and_probe(hsg, files):
    trace = files / "t.tsv"
    code, out, _ = hsg("sim", "run", files / "world.json", "--ticks", 5, "--trace", trace)
    assert code == 0
    assert trace.read_bytes() == (GOLDEN / "self_loop_trace.tsv").read_bytes()
    assert json.loads(out)["events"] == 3  # fires at ticks 0, 2, 4
    code, out, _ = hsg("sim", "probe", files / "world.json", "--point", "n0", "--at", 2, "--horizon", 8)
    res = json.loads(out)
    assert code == 0 and res["ok"] and res["bound"] == 3


def test_check_and_render(hsg, files):
    code, out, _ = hsg("check", "grid", files / "grid.json")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    code, out, _ = hsg("render", "table", "builtin:table2")
    assert code == 0 and out == (GOLDEN / "table2.txt").read_text(encoding="utf-8")
    code, out, _ = hsg("render", "table", files / "grid.json")
    assert code == 1  # no hints and no axes given


def test_check_tower_without_files(hsg):
    code, out, _ = hsg("check", "tower")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_check_builtin_jguard(hsg):
    code, out, _ = hsg("check", "jguard", "--builtin")
    assert code == 0
    assert len(json.loads(out)["documents"]) == 30


@pytest.mark.parametrize(
    "argv,code",
    [
        (["frobnicate"], 1),
        ([], 1),
        (["check", "nosuchsuite", "x"], 1),
        (["check", "all"], 1),
        (["sim", "run", "/nonexistent/w.json", "--ticks", "1"], 4),
        (["canon", "/nonexistent.json"], 4),
    ],
)
def test_exit_codes(hsg, argv, code):
    assert hsg(*argv)[0] == code


def test_invalid_documents_exit_2(hsg, files):
    bad = files / "bad.json"
    bad.write_text('{"kind": "grid", "format_version": 1, "body": {"axes": "x"}}')
    code, out, _ = hsg("check", "all", bad)
    assert code == 2 and json.loads(out)["documents"][0]["kind"] == "unparsed"
    assert hsg("canon", bad)[0] == 2


def test_undeclared_symbol_exit_2(hsg, files):
    from hsgkit.registry import init_registry

    doc = {"kind": "category", "format_version": 1, "body": {"chain": ["a"]}, "symbols": ["Q"], "registry": init_registry().to_body()}
    p = files / "sym.json"
    p.write_text(json.dumps(doc))
    assert hsg("canon", p)[0] == 2


def test_seed_precedence(hsg, files, monkeypatch):
    body = {"points": [{"id": "a", "neuron": {"theta": 5.0}}], "fibers": [{"kind": "input", "noise": 0.1}]}
    no_seed = files / "noisy.json"
    no_seed.write_text(make_document("world", body))
    with_seed = files / "noisy_seeded.json"
    with_seed.write_text(make_document("world", {**body, "seed": 5}))

    def digest(*argv):
        return json.loads(hsg("sim", "run", *argv, "--ticks", 5)[1])["trace_sha256"]

    monkeypatch.setenv("HSG_SEED", "5")
    from_env = digest(no_seed)
    monkeypatch.delenv("HSG_SEED")
    assert digest(no_seed, "--seed", 5) == from_env == digest(with_seed)
    assert digest(no_seed) == digest(no_seed, "--seed", 0) != from_env
    monkeypatch.setenv("HSG_SEED", "9")
    assert digest(with_seed) == from_env  # document seed beats the environment
    assert hsg("sim", "run", no_seed, "--ticks", 1, "--seed", -1)[0] == 1


def _commands(files):
    store = files / "det_reg.json"
    return [
        ["check", "all", files / "grid.json"],
        ["check", "kan", "--builtin"],
        ["sim", "run", files / "world.json", "--ticks", 12],
        ["sim", "probe", files / "world.json", "--point", "n0", "--at", 1, "--horizon", 6],
        ["render", "table", "builtin:table1"],
        ["canon", files / "world.json"],
        ["registry", "list", "--store", store],
        ["registry", "order", "--store", store],
        ["registry", "attest", "--store", store, "--instance", "x", "--counter", 1],
    ]


def test_every_command_is_deterministic(hsg, files):
    hsg("registry", "init", "--store", files / "det_reg.json")
    for argv in _commands(files):
        assert hsg(*argv)[:2] == hsg(*argv)[:2], argv


def test_console_entry_point(files):
    cmd = [sys.executable, "-m", "hsgkit.cli", "render", "table", "builtin:table1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b == (GOLDEN / "table1.txt").read_bytes()


def test_attest_accepts_positional_instance(hsg, tmp_path):
    store = tmp_path / "reg.json"
    hsg("registry", "init", "--store", store)
    by_flag = hsg("registry", "attest", "--store", store, "--instance", "n1")
    by_position = hsg("registry", "attest", "n1", "--store", store)
    assert by_flag[0] == by_position[0] == 0
    assert by_flag[1] == by_position[1]
    assert json.loads(by_flag[1])["counter"] == 0
    assert hsg("registry", "attest", "--store", store)[0] == 1
    assert hsg("registry", "attest", "n1", "--store", store, "--counter", -1)[0] == 1
