"""Command-line entry point.

Exit codes: 0 pass, 1 usage, 2 validation failure, 3 registry conflict,
4 I/O error, 5 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import replace
from pathlib import Path

from .canon import canonical_json
from .document import canonicalize, parse_document
from .errors import (
    CapacityError,
    DependencyError,
    DocumentError,
    HSGError,
    RegistryConflict,
    SimulationInvariantError,
)
from .fixtures import table_document
from .grid import grid_from_body
from .neuro import world as sim
from .registry import (
    SymbolRedeclared,
    attach_package,
    attest_internal,
    attestation_from_dict,
    detach_package,
    init_registry,
    package_from_dict,
    registry_from_body,
    resolve_order,
    verify_attestation,
)
from .render import render_grid_table
from .suites import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CONFLICT, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5
SEED_MAX = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _write(path: str | None, data: str | bytes):
    if path is None or path == "-":
        sys.stdout.write(data if isinstance(data, str) else data.decode("utf-8"))
        return
    Path(path).write_bytes(data.encode("utf-8") if isinstance(data, str) else data)


def _load(path: str, kind: str | None = None):
    doc = parse_document(_read(path))
    if kind is not None and doc.kind != kind:
        raise DocumentError("schema", f"{path}: expected a {kind} document, got {doc.kind}")
    return doc


def _seed(arg, body) -> int | None:
    if arg is not None:
        seed = arg
    elif "seed" in body:
        return None
    elif os.environ.get("HSG_SEED"):
        try:
            seed = int(os.environ["HSG_SEED"], 0)
        except ValueError:
            raise UsageError("HSG_SEED must be an integer") from None
    else:
        return None
    if not 0 <= seed <= SEED_MAX:
        raise UsageError("seed must fit in 64 unsigned bits")
    return seed


# --- commands ----------------------------------------------------------------


def cmd_check(a) -> int:
    if not a.files and not a.builtin and a.suite != "tower":
        raise UsageError("check needs document files or --builtin")
    docs = [_load_for_check(p) for p in a.files]
    failures = [d for d in docs if isinstance(d, dict)]
    result = run_suite([d for d in docs if not isinstance(d, dict)], a.suite, a.builtin)
    out = result.to_dict()
    if failures:
        out["documents"] = sorted(out["documents"] + failures, key=lambda d: (d["id"], d["kind"]))
        out["verdict"] = "fail"
    _write(a.out, canonical_json(out))
    return EXIT_OK if out["verdict"] != "fail" else EXIT_INVALID


def _load_for_check(path: str):
    """A parsed document, or a failed report entry when it does not parse."""
    data = _read(path)
    try:
        doc = parse_document(data)
    except DocumentError as e:
        loc = [e.line, e.column] if e.line is not None else []
        return {
            "id": path,
            "kind": "unparsed",
            "subject": path,
            "verdict": "fail",
            "findings": [{"code": e.code, "message": str(e), "location": loc, "severity": "error"}],
        }
    if not doc.id:
        doc = replace(doc, id=Path(path).name)
    return doc


def _store_registry(path: str):
    doc = _load(path, "registry")
    return registry_from_body(doc.body)


def _save_registry(path: str, r):
    _write(path, canonical_json(r.to_document()))


def cmd_registry(a) -> int:
    op = a.op
    if op == "init":
        if Path(a.store).exists() and not a.force:
            raise RegistryConflict(f"{a.store} already exists; pass --force to overwrite")
        r = init_registry()
        _save_registry(a.store, r)
        _write(None, canonical_json({"packages": list(r.packages)}))
        return EXIT_OK
    r = _store_registry(a.store)
    if op == "attach":
        p = package_from_dict(_load(a.package, "package").body)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SymbolRedeclared)
            r = attach_package(r, p)
        _save_registry(a.store, r)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        _write(None, canonical_json({"attached": p.id, "packages": sorted(r.packages)}))
    elif op == "detach":
        r = detach_package(r, a.id)
        _save_registry(a.store, r)
        _write(None, canonical_json({"detached": a.id, "packages": sorted(r.packages)}))
    elif op == "list":
        pkgs = [{"id": p.id, "version": p.version, "dependencies": list(p.dependencies), "symbols": [s.symbol for s in p.symbols]} for p in r.packages.values()]
        _write(None, canonical_json({"packages": sorted(pkgs, key=lambda p: p["id"])}))
    elif op == "order":
        _write(None, canonical_json({"order": resolve_order(r)}))
    elif op == "attest":
        instance = a.instance_id or a.instance
        if not instance or (a.instance_id and a.instance and a.instance_id != a.instance):
            raise UsageError("attest needs exactly one instance id")
        if a.counter < 0:
            raise UsageError("counter must be a natural number")
        att = attest_internal(r, instance, a.counter)
        _write(a.out, canonical_json(att.to_dict()))
    elif op == "verify":
        try:
            att = attestation_from_dict(json.loads(_read(a.attestation).decode("utf-8")))
        except (ValueError, UnicodeDecodeError) as e:
            raise DocumentError("syntax", f"{a.attestation}: {e}") from None
        ok = verify_attestation(att, r)
        _write(None, canonical_json({"verified": ok}))
        return EXIT_OK if ok else EXIT_INVALID
    return EXIT_OK


def cmd_sim(a) -> int:
    doc = _load(a.world, "world")
    w = sim.world_from_body(doc.body, _seed(a.seed, doc.body))
    if a.op == "run":
        if not 0 <= a.ticks <= sim.TICK_CAP:
            raise CapacityError(f"--ticks must be in 0..{sim.TICK_CAP}")
        w = sim.run(w, a.ticks)
        if a.trace:
            _write(a.trace, sim.trace_bytes(w))
        _write(a.out, canonical_json(sim.summary(w)))
        return EXIT_OK
    if a.horizon > sim.TICK_CAP:
        raise CapacityError(f"--horizon must be at most {sim.TICK_CAP}")
    res = sim.causality_probe(w, (a.point, a.at, a.channel, a.magnitude), a.horizon)
    _write(a.out, canonical_json(res))
    return EXIT_OK if res["ok"] else EXIT_INVALID


def cmd_render(a) -> int:
    if a.grid.startswith("builtin:"):
        body = table_document(a.grid.split(":", 1)[1])["body"]
    else:
        body = _load(a.grid, "grid").body
    hints = body.get("render", {})
    rows, cols = a.rows or hints.get("rows"), a.cols or hints.get("cols")
    if not rows or not cols:
        raise UsageError("render needs --rows and --cols (or render hints in the document)")
    text = render_grid_table(grid_from_body(body), rows, cols, hints.get("corner", ""), hints.get("caption", ""))
    _write(a.out, text)
    return EXIT_OK


def cmd_canon(a) -> int:
    _write(a.out, canonicalize(_read(a.file)))
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hsg", description="Finite checks for hierarchical state grids.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", help="run a check suite over documents")
    c.add_argument("suite", choices=SUITES)
    c.add_argument("files", nargs="*")
    c.add_argument("--builtin", action="store_true", help="also run the builtin fixture pack")
    c.add_argument("--out", help="write the report here instead of stdout")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("registry", help="manage an axiom-package registry file")
    rs = r.add_subparsers(dest="op", parser_class=_Parser)
    rs.required = True
    for name in ("init", "attach", "detach", "list", "order", "attest", "verify"):
        sp = rs.add_parser(name)
        sp.add_argument("--store", required=True, help="registry document path")
        if name == "init":
            sp.add_argument("--force", action="store_true")
        elif name == "attach":
            sp.add_argument("package", help="package document path")
        elif name == "detach":
            sp.add_argument("id")
        elif name == "attest":
            sp.add_argument("instance_id", nargs="?")
            sp.add_argument("--instance", help="same as the positional instance id")
            sp.add_argument("--counter", type=int, default=0)
            sp.add_argument("--out")
        elif name == "verify":
            sp.add_argument("attestation")
        sp.set_defaults(func=cmd_registry)

    s = sub.add_parser("sim", help="run or probe a world simulation")
    ss = s.add_subparsers(dest="op", parser_class=_Parser)
    ss.required = True
    run = ss.add_parser("run")
    run.add_argument("world")
    run.add_argument("--ticks", type=int, required=True)
    run.add_argument("--trace")
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.set_defaults(func=cmd_sim)
    pr = ss.add_parser("probe")
    pr.add_argument("world")
    pr.add_argument("--point", required=True)
    pr.add_argument("--at", type=int, required=True, help="tick of the perturbation")
    pr.add_argument("--channel", default="potential")
    pr.add_argument("--magnitude", type=float, default=1.0)
    pr.add_argument("--horizon", type=int, required=True)
    pr.add_argument("--seed", type=int)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_sim)

    rd = sub.add_parser("render", help="render a grid as a table")
    rds = rd.add_subparsers(dest="what", parser_class=_Parser)
    rds.required = True
    t = rds.add_parser("table")
    t.add_argument("grid", help="grid document path, or builtin:table1 / builtin:table2")
    t.add_argument("--rows")
    t.add_argument("--cols")
    t.add_argument("--out")
    t.set_defaults(func=cmd_render)

    cn = sub.add_parser("canon", help="print the canonical form of a document")
    cn.add_argument("file")
    cn.add_argument("--out")
    cn.set_defaults(func=cmd_canon)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RegistryConflict, DependencyError) as e:
        print(f"conflict: {e}", file=sys.stderr)
        return EXIT_CONFLICT
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except SimulationInvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except HSGError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
