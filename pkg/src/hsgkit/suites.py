"""Check suites: route documents to the owning checkers and aggregate."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .adjunction import ListMonad, builtin_adjunction, check_idempotent, monad_of, verify_adjunction
from .category import EnumerationCap, validate_category, validate_functor
from .document import Document
from .errors import HSGError
from .fixtures import (
    bc_disjoint_square,
    bc_product_square,
    institution_fixtures,
    j_fixtures,
    kan_fixtures,
    table_grid,
)
from .grid import Axis, build_grid, check_state_identity, grid_from_body
from .institution import check_institution_morphism
from .jguard import check_quasi_adjunction
from .kan import (
    beck_chevalley_check,
    delete_element,
    duplicate_element,
    kan_extend,
    validate_set_functor,
    verify_kan_universal,
)
from .loaders import (
    adjunction_from_body,
    category_from_body,
    criterion_from_body,
    diagram_from_body,
    functor_from_body,
    ring_from_body,
    temporal_from_body,
)
from .neuro.world import world_from_body
from .registry import Registry, attach_package, init_registry, package_from_dict, registry_from_body, validate_registry
from .report import INFO, Finding, Report
from .rings import check_free_ring_universal, validate_ring
from .temporal import future_violations
from .tower import build_numeric_tower

SUITES = ("all", "category", "adjunction", "kan", "grid", "temporal", "jguard", "tower", "registry")
# large enough for the order adjunction on sets of size three
WIDE_CAP = EnumerationCap(12, 512)


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    reports: tuple  # of (document id, kind, Report)

    @property
    def ok(self) -> bool:
        return all(r.ok for _, _, r in self.reports)

    @property
    def verdict(self) -> str:
        verdicts = {r.verdict for _, _, r in self.reports}
        return "fail" if "fail" in verdicts else "warn" if "warn" in verdicts else "pass"

    def to_dict(self) -> dict:
        docs = []
        for doc_id, kind, r in sorted(self.reports, key=lambda x: (x[0], x[1])):
            findings = sorted((f.to_dict() for f in r.findings), key=lambda f: (f["code"], f["message"]))
            docs.append({"id": doc_id, "kind": kind, "subject": r.subject, "verdict": r.verdict, "findings": findings})
        return {"suite": self.suite, "verdict": self.verdict, "documents": docs}


def _guard(subject: str, fn: Callable[[], Report]) -> Report:
    """Turn input errors raised by a checker into error findings."""
    try:
        return fn()
    except HSGError as e:
        code = type(e).__name__.replace("Error", "").lower() or "error"
        return Report(subject, (Finding(code, str(e)),))


def _expect_failure(r: Report, what: str) -> Report:
    if r.ok:
        return Report(r.subject, (Finding("expected-failure", f"{what} was expected to fail but passed"),))
    return Report(r.subject, (Finding("expected-failure", f"{what} fails as planted: {', '.join(sorted(r.codes()))}", (), INFO),))


def _merge(subject: str, reports: Iterable[Report]) -> Report:
    reports = list(reports)
    return Report(subject, tuple(f for r in reports for f in r.findings), {})


# --- per-kind checks ---------------------------------------------------------------


def _check_category(b) -> Report:
    return validate_category(category_from_body(b))


def _check_functor(b) -> Report:
    f = functor_from_body(b)
    return _merge("functor", [validate_category(f.source), validate_category(f.target), validate_functor(f)])


def _check_adjunction(b) -> Report:
    adj = adjunction_from_body(b, WIDE_CAP)
    return verify_adjunction(adj, WIDE_CAP)


def _kan_report(f, k, side: str) -> Report:
    sides = ("left", "right") if side == "both" else (side,)
    reports = [validate_set_functor(f)]
    if not reports[0].ok:
        return reports[0]
    for s in sides:
        ext = kan_extend(s, f, k)
        reports.append(verify_kan_universal(ext, f, k, s, [ext]))
    return _merge("Kan extension", reports)


def _check_diagram(b) -> Report:
    f, k, side = diagram_from_body(b)
    return _kan_report(f, k, side)


def _check_grid(b) -> Report:
    return check_state_identity(grid_from_body(b))


def _check_temporal(b) -> Report:
    g = grid_from_body(b["grid"] if "grid" in b else b)
    if "dep" not in b:
        return Report("no-future-reference", (Finding("no-dependencies", "document declares no dependency edges", (), INFO),))
    dep, tb = temporal_from_body(b)
    bad = future_violations(g, dep, tb)
    defined = [(x, y) for x, y in bad if g.delta[x]]
    return Report(
        "no-future-reference",
        tuple(Finding("future-reference", f"{x} is defined but depends on later token {y}", (x, y)) for x, y in defined),
    )


def _check_criterion(b) -> Report:
    g, j = criterion_from_body(b)
    qa = check_quasi_adjunction(j, g)
    expect = b.get("expect")
    findings = list(qa.report.findings)
    if expect is not None:
        findings = [Finding(f.code, f.message, f.location, INFO) for f in findings]
        if qa.mode != expect:
            findings.append(Finding("mode", f"classified as {qa.mode}, expected {expect}"))
    elif qa.mode == "fails":
        findings.append(Finding("mode", "criterion violates J0: κ does not exist", (qa.witness,) if qa.witness else ()))
    return Report(f"J quasi-adjunction ({qa.mode})", tuple(findings), {"mode": qa.mode})


def _check_registry(b) -> Report:
    return validate_registry(registry_from_body(b))


def _check_package(b) -> Report:
    p = package_from_dict(b)
    r = init_registry()
    if p.id in r.packages:
        return validate_registry(Registry({p.id: p}))
    return validate_registry(attach_package(r, p))


def _check_ring(b) -> Report:
    r = ring_from_body(b)
    reports = [validate_ring(r)]
    if "generators" in b and reports[0].ok:
        reports.append(check_free_ring_universal(b["generators"], r))
    return _merge(r.name or "ring", reports)


def _check_world(b) -> Report:
    world_from_body(b)
    return Report("world", ())


CHECKS = {
    "category": [("category", _check_category)],
    "functor": [("category", _check_functor)],
    "adjunction": [("adjunction", _check_adjunction)],
    "diagram": [("kan", _check_diagram)],
    "grid": [("grid", _check_grid), ("temporal", _check_temporal)],
    "criterion": [("jguard", _check_criterion), ("temporal", _check_temporal)],
    "registry": [("registry", _check_registry)],
    "package": [("registry", _check_package)],
    "ring": [("all", _check_ring)],
    "world": [("all", _check_world)],
}


def check_document(doc: Document, suite: str = "all") -> Report:
    checks = [(s, fn) for s, fn in CHECKS[doc.kind] if suite == "all" or s == suite]
    if not checks:
        return Report(doc.id, (Finding("skipped", f"{doc.kind} documents are not part of the {suite} suite", (), INFO),))
    reports = [_guard(doc.id, lambda fn=fn: fn(doc.body)) for _, fn in checks]
    warn = tuple(Finding("symbols", w, (), "warning") for w in doc.warnings)
    merged = _merge(doc.id or doc.kind, reports)
    return Report(merged.subject, warn + merged.findings)


def run_suite(docs: Iterable[Document], suite: str = "all", builtin: bool = False) -> SuiteResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    reports = [(d.id, d.kind, check_document(d, suite)) for d in docs]
    if builtin:
        reports.extend((name, "builtin", _guard(name, fn)) for name, fn in builtin_checks(suite))
    elif suite == "tower":
        reports.append(("tower/numeric", "builtin", _guard("tower", lambda: build_numeric_tower().report())))
    return SuiteResult(suite, tuple(reports))


# --- builtin fixture pack -----------------------------------------------------


def definability_grid():
    """Four tokens on a time axis, two of them undefined."""
    axis = Axis("time", (0, 1, 2, 3))
    return build_grid([axis], [(f"x{i}", (i,)) for i in range(4)], {"x0": "⊥", "x1": "⊤", "x2": "⊥", "x3": "⊤"})


def builtin_adjunctions() -> dict:
    return {
        "definability": builtin_adjunction("definability", definability_grid()),
        "emptiness": builtin_adjunction("emptiness", 3),
        "discrete_order": builtin_adjunction("discrete_order", 3, WIDE_CAP),
    }


def _idempotent_report(name: str, m, expected: bool) -> Report:
    res = check_idempotent(m)
    if res.idempotent == expected:
        return Report(name, ())
    return Report(name, (Finding("idempotency", f"idempotent={res.idempotent}, expected {expected}: {res.detail}", ()),))


def _kan_fixture_report(fx) -> Report:
    out = []
    for side in ("left", "right"):
        ext = kan_extend(side, fx.f, fx.k)
        r = verify_kan_universal(ext, fx.f, fx.k, side, [ext])
        out.extend(r.findings)
        for x in fx.k.target.objects:
            for v in ext.functor.value[x]:
                for kind, pert in (("deleted", delete_element(ext.functor, x, v)), ("duplicated", duplicate_element(ext.functor, x, v))):
                    if verify_kan_universal(pert, fx.f, fx.k, side, [ext, pert]).ok:
                        out.append(Finding("undetected", f"{side}: {kind} element {v!r} at {x} not rejected", (side, x)))
    return Report(fx.name, tuple(out))


def _j_fixture_report(fx) -> Report:
    qa = check_quasi_adjunction(fx.criterion, fx.grid)
    if qa.mode != fx.expected:
        return Report(fx.name, (Finding("mode", f"classified as {qa.mode}, expected {fx.expected}"),))
    return Report(fx.name, ())


def _institution_report(name, m) -> Report:
    r = check_institution_morphism(m)
    return r if name in ("identity", "swap", "forget-q") else _expect_failure(r, f"institution morphism {name}")


def builtin_checks(suite: str = "all") -> list:
    def want(s):
        return suite in ("all", s)

    out = []
    if want("adjunction"):
        for name in ("definability", "emptiness", "discrete_order"):
            out.append((f"adjunction/{name}", lambda n=name: verify_adjunction(builtin_adjunctions()[n], WIDE_CAP)))
        out.append(("monad/T0", lambda: _idempotent_report("T0", monad_of(builtin_adjunction("definability", definability_grid())), True)))
        out.append(("monad/T1", lambda: _idempotent_report("T1", monad_of(builtin_adjunction("emptiness", 3)), True)))
        out.append(("monad/list", lambda: _idempotent_report("list monad", ListMonad(), False)))
    if want("kan"):
        for fx in kan_fixtures():
            out.append((f"kan/{fx.name}", lambda fx=fx: _kan_fixture_report(fx)))
        out.append(("bc/product", lambda: beck_chevalley_check(*bc_product_square())))
        out.append(("bc/disjoint", lambda: _expect_failure(beck_chevalley_check(*bc_disjoint_square()), "disjoint square")))
    if want("jguard"):
        for fx in j_fixtures():
            out.append((f"jguard/{fx.name}", lambda fx=fx: _j_fixture_report(fx)))
    if want("grid"):
        for t in ("table1", "table2"):
            out.append((f"grid/{t}", lambda t=t: check_state_identity(table_grid(t))))
    if want("registry"):
        out.append(("registry/init", lambda: validate_registry(init_registry())))
        for name, m in institution_fixtures():
            out.append((f"institution/{name}", lambda name=name, m=m: _institution_report(name, m)))
    if want("tower"):
        out.append(("tower/numeric", lambda: build_numeric_tower().report()))
    return out
