"""Axiom-package registry rooted at the self-reference package, with
attestation of the loaded package set."""
from __future__ import annotations

import hashlib
import heapq
import re
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .canon import canonical_bytes, canonical_json
from .errors import DependencyError, MalformedInputError, NotFoundError, RegistryConflict
from .report import Finding, Report

ROOT_ID = "ces"
FORMAT_VERSION = 1


class SymbolRedeclared(UserWarning):
    """A package redeclares a symbol with identical arity and meaning."""


@dataclass(frozen=True)
class NotationalAxiom:
    symbol: str
    arity: int
    meaning: str = ""
    rendering: str = ""

    def __post_init__(self):
        if not isinstance(self.symbol, str) or not self.symbol:
            raise MalformedInputError("notational axiom needs a nonempty symbol")
        if not isinstance(self.arity, int) or isinstance(self.arity, bool) or self.arity < 0:
            raise MalformedInputError(f"symbol {self.symbol!r}: arity must be a natural number")

    def signature(self) -> tuple:
        return (self.arity, self.meaning)

    def to_dict(self):
        return {"symbol": self.symbol, "arity": self.arity, "meaning": self.meaning, "rendering": self.rendering}


@dataclass(frozen=True)
class Axiom:
    name: str
    statement: str
    hook: str | None = None

    def to_dict(self):
        d = {"name": self.name, "statement": self.statement}
        if self.hook is not None:
            d["hook"] = self.hook
        return d


@dataclass(frozen=True)
class AxiomPackage:
    id: str
    version: str = "1"
    dependencies: tuple = ()
    symbols: tuple = ()
    axioms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "dependencies", tuple(self.dependencies))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "axioms", tuple(self.axioms))
        if not isinstance(self.id, str) or not self.id:
            raise MalformedInputError("package id must be a nonempty string")
        names = [s.symbol for s in self.symbols]
        dup = sorted({n for n in names if names.count(n) > 1})
        if dup:
            raise MalformedInputError(f"package {self.id}: symbols declared twice: {dup}")

    def symbol_table(self) -> dict:
        return {s.symbol: s for s in self.symbols}

    def to_dict(self):
        return {
            "id": self.id,
            "version": self.version,
            "dependencies": list(self.dependencies),
            "symbols": [s.to_dict() for s in self.symbols],
            "axioms": [a.to_dict() for a in self.axioms],
        }


def package_from_dict(d: Mapping) -> AxiomPackage:
    try:
        return AxiomPackage(
            d["id"],
            str(d.get("version", "1")),
            tuple(d.get("dependencies", ())),
            tuple(
                NotationalAxiom(s["symbol"], s.get("arity", 0), s.get("meaning", ""), s.get("rendering", ""))
                for s in d.get("symbols", ())
            ),
            tuple(Axiom(a["name"], a["statement"], a.get("hook")) for a in d.get("axioms", ())),
        )
    except (KeyError, TypeError) as e:
        raise MalformedInputError(f"malformed package: {e}") from None


def ces_package() -> AxiomPackage:
    return AxiomPackage(
        ROOT_ID,
        "1",
        (),
        (
            NotationalAxiom("E", 1, "existence predicate", "E(t)"),
            NotationalAxiom("S", 1, "self-reference operator", "S(t)"),
            NotationalAxiom("=", 2, "exact identity", "a = b"),
            NotationalAxiom(":=", 2, "definition", "a := b"),
        ),
        (Axiom("ces", "E(t) := (S(t) = t)", "ces_holds"),),
    )


@dataclass(frozen=True)
class Registry:
    packages: Mapping[str, AxiomPackage] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "packages", MappingProxyType(dict(self.packages)))

    def __contains__(self, pid):
        return pid in self.packages

    def __getitem__(self, pid) -> AxiomPackage:
        try:
            return self.packages[pid]
        except KeyError:
            raise NotFoundError(f"no package {pid!r}") from None

    def ids(self) -> list:
        return list(self.packages)

    def symbols(self) -> dict:
        """All declared symbols, first declaration wins."""
        out = {}
        for p in self.packages.values():
            for s in p.symbols:
                out.setdefault(s.symbol, s)
        return out

    def dependents(self, pid: str) -> list:
        return sorted(q.id for q in self.packages.values() if pid in q.dependencies)

    def to_body(self) -> dict:
        return {"root": ROOT_ID, "packages": [p.to_dict() for p in sorted(self.packages.values(), key=lambda p: p.id)]}

    def to_document(self, doc_id: str = "registry") -> dict:
        return {"format_version": FORMAT_VERSION, "kind": "registry", "id": doc_id, "body": self.to_body()}

    def serialize(self) -> str:
        return canonical_json(self.to_document())


def validate_registry(r: Registry) -> Report:
    out = []
    if ROOT_ID not in r.packages:
        out.append(Finding("root", "root package is missing", ()))
    else:
        ref, got = ces_package(), r.packages[ROOT_ID]
        if got.dependencies:
            out.append(Finding("root", "root package must not have dependencies", (ROOT_ID,)))
        if {s.symbol for s in got.symbols} != {s.symbol for s in ref.symbols}:
            out.append(Finding("root", "root package symbols differ from {E, S, =, :=}", (ROOT_ID,)))
        if [a.statement for a in got.axioms] != [a.statement for a in ref.axioms]:
            out.append(Finding("root", "root package must carry exactly the single self-reference axiom", (ROOT_ID,)))
    for p in r.packages.values():
        for dep in p.dependencies:
            if dep not in r.packages:
                out.append(Finding("dependency", f"{p.id} depends on missing package {dep}", (p.id, dep)))
    seen = {}
    for p in r.packages.values():
        for s in p.symbols:
            if s.symbol in seen and seen[s.symbol][1].signature() != s.signature():
                out.append(
                    Finding("symbol-collision", f"symbol {s.symbol!r} declared differently by {seen[s.symbol][0]} and {p.id}", (s.symbol,))
                )
            seen.setdefault(s.symbol, (p.id, s))
    try:
        resolve_order(r)
    except DependencyError as e:
        out.append(Finding("cycle", str(e), tuple(e.path)))
    return Report("registry", tuple(out))


def registry_from_body(body: Mapping) -> Registry:
    pkgs = {}
    for d in body.get("packages", ()):
        p = package_from_dict(d)
        if p.id in pkgs:
            raise RegistryConflict(f"duplicate package id {p.id!r}")
        pkgs[p.id] = p
    return Registry(pkgs)


def init_registry() -> Registry:
    return Registry({ROOT_ID: ces_package()})


def attach_package(r: Registry, p: AxiomPackage) -> Registry:
    if p.id in r.packages:
        raise RegistryConflict(f"package id {p.id!r} already present")
    missing = [d for d in p.dependencies if d not in r.packages]
    if missing:
        raise DependencyError(f"unresolved dependencies of {p.id}: {', '.join(missing)}", missing)
    existing = {}
    for q in r.packages.values():
        for s in q.symbols:
            existing.setdefault(s.symbol, (q.id, s))
    for s in p.symbols:
        if s.symbol in existing:
            owner, prev = existing[s.symbol]
            if prev.signature() != s.signature():
                raise RegistryConflict(
                    f"symbol {s.symbol!r} of {p.id} (arity {s.arity}) collides with {owner} (arity {prev.arity})"
                )
            warnings.warn(f"{p.id} redeclares symbol {s.symbol!r} of {owner} identically", SymbolRedeclared, stacklevel=2)
    pkgs = dict(r.packages)
    pkgs[p.id] = p
    return Registry(pkgs)


def detach_package(r: Registry, pid: str) -> Registry:
    if pid == ROOT_ID:
        raise RegistryConflict("the root package cannot be detached")
    if pid not in r.packages:
        raise NotFoundError(f"no package {pid!r}")
    deps = r.dependents(pid)
    if deps:
        raise RegistryConflict(f"package {pid!r} is required by {', '.join(deps)}")
    return Registry({k: v for k, v in r.packages.items() if k != pid})


def resolve_order(r: Registry) -> list:
    """Dependencies first; ties broken by id.  Cycles raise with their path."""
    indeg = {pid: 0 for pid in r.packages}
    users = {pid: [] for pid in r.packages}
    for p in r.packages.values():
        for d in p.dependencies:
            if d not in r.packages:
                raise DependencyError(f"{p.id} depends on missing package {d}", [p.id, d])
            indeg[p.id] += 1
            users[d].append(p.id)
    heap = [pid for pid, n in indeg.items() if n == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        pid = heapq.heappop(heap)
        order.append(pid)
        for u in users[pid]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, u)
    if len(order) < len(r.packages):
        path = _find_cycle(r, {pid for pid, n in indeg.items() if n > 0})
        raise DependencyError("dependency cycle: " + " → ".join(path), path)
    return order


def _find_cycle(r: Registry, remaining: set) -> list:
    start = min(remaining)
    path, index = [start], {start: 0}
    while True:
        nxt = min(d for d in r.packages[path[-1]].dependencies if d in remaining)
        if nxt in index:
            return path[index[nxt]:] + [nxt]
        index[nxt] = len(path)
        path.append(nxt)


def ces_holds(term: str, s_table: Mapping[str, str]) -> bool:
    """True iff ``S(term)`` is defined and byte-identical to ``term``."""
    if term not in s_table:
        return False
    image = s_table[term]
    if not isinstance(image, str) or not isinstance(term, str):
        return False
    return image.encode("utf-8") == term.encode("utf-8")


def existence_statement(term: str) -> str:
    """The serialized form ``E(term)``, usable as a term again."""
    return f"E({term})"


# --- attestation ----------------------------------------------------------

_STATEMENT = "instance {id} with digest {digest} is operating at {counter}"
_STATEMENT_RE = re.compile(r"\Ainstance (?P<id>.+) with digest (?P<digest>[0-9a-f]{64}) is operating at (?P<counter>0|[1-9][0-9]*)\Z")


@dataclass(frozen=True)
class Attestation:
    instance_id: str
    package_digest: str
    counter: int
    statement: str
    echo: str

    def to_dict(self):
        return {
            "instance_id": self.instance_id,
            "package_digest": self.package_digest,
            "counter": self.counter,
            "statement": self.statement,
            "echo": self.echo,
        }


def registry_digest(r: Registry) -> str:
    return hashlib.sha256(canonical_bytes(r.to_document())).hexdigest()


def _echo(statement: str) -> str:
    """Rebuild the statement from its parsed fields, not from the inputs."""
    m = _STATEMENT_RE.match(statement)
    if m is None:
        return ""
    return _STATEMENT.format(id=m["id"], digest=m["digest"], counter=int(m["counter"]))


def attest_internal(r: Registry, instance_id: str, counter: int) -> Attestation:
    if not isinstance(counter, int) or isinstance(counter, bool) or counter < 0:
        raise MalformedInputError("counter must be a natural number")
    if not instance_id or "\n" in instance_id:
        raise MalformedInputError("instance id must be a nonempty single line")
    digest = registry_digest(r)
    statement = _STATEMENT.format(id=instance_id, digest=digest, counter=counter)
    att = Attestation(instance_id, digest, counter, statement, _echo(statement))
    if not verify_attestation(att):
        raise MalformedInputError("attestation echo does not reproduce its statement")
    return att


def verify_attestation(att: Attestation, r: Registry | None = None) -> bool:
    if not ces_holds(att.statement, {att.statement: att.echo}):
        return False
    if _echo(att.statement) != att.statement:
        return False
    m = _STATEMENT_RE.match(att.statement)
    if m["id"] != att.instance_id or m["digest"] != att.package_digest or int(m["counter"]) != att.counter:
        return False
    return r is None or registry_digest(r) == att.package_digest


def attestation_from_dict(d: Mapping) -> Attestation:
    try:
        return Attestation(d["instance_id"], d["package_digest"], int(d["counter"]), d["statement"], d["echo"])
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInputError(f"malformed attestation: {e}") from None
