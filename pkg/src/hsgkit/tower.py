"""The numeric depth tower: seven levels, six edges, each with a finite witness
where one exists."""
from __future__ import annotations

from dataclasses import dataclass, field

from .adjunction import Adjunction, builtin_adjunction, verify_adjunction
from .grid import Axis, build_grid
from .jguard import ExternalCriterion, check_quasi_adjunction
from .report import Finding, Report
from .rings import RationalField, check_free_ring_universal, check_frac_extension, zmod

LABELS = ("Definability", "Emptiness", "Set", "OrdSet", "Ring", "Field", "CompleteField")
# finite carrier standing in for each level; completion has none
NODE_WITNESSES = ("T_δ over a token grid", "C1", "FinSet≤3", "Pos≤2", "Z[x, y]", "Q", None)
INTERNAL, J_RELATIVE = "internal-adjunction", "j-relative"


@dataclass(frozen=True)
class TowerNode:
    level: int
    label: str
    witness: str | None = None


@dataclass(frozen=True)
class TowerEdge:
    source: int
    target: int
    kind: str
    adjunction: Adjunction | None = None
    witness: str | None = None  # short name of the finite check, None when symbolic
    report: Report | None = None

    @property
    def symbolic(self) -> bool:
        return self.witness is None

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.ok


@dataclass(frozen=True)
class Tower:
    nodes: tuple
    edges: tuple

    def edge(self, source: int) -> TowerEdge:
        return next(e for e in self.edges if e.source == source)

    def report(self) -> Report:
        findings = []
        for e in self.edges:
            if e.report is None:
                findings.append(Finding("symbolic", f"edge {e.source}→{e.target} has no finite witness", (e.source, e.target), "info"))
            elif not e.report.ok:
                findings.extend(
                    Finding(f.code, f"edge {e.source}→{e.target}: {f.message}", (e.source, e.target), f.severity)
                    for f in e.report.findings
                )
        return Report("numeric tower", tuple(findings))


@dataclass(frozen=True)
class CompletionDescriptor:
    level: int = 6
    label: str = "CompleteField"
    kind: str = "reflection"
    idempotent: bool = True
    idempotency_law: str = "K̂̂ ≅ K̂"
    numeric: bool = False
    notes: tuple = field(default=("valuation completion is represented symbolically",))


def completion_descriptor() -> CompletionDescriptor:
    return CompletionDescriptor()


def _j_fixture_grid():
    axis = Axis("time", (0, 1))
    return build_grid([axis], [("x0", (0,)), ("x1", (1,))], {"x0": "⊥", "x1": "⊤"})


def build_numeric_tower() -> Tower:
    nodes = tuple(TowerNode(i, lab, w) for i, (lab, w) in enumerate(zip(LABELS, NODE_WITNESSES)))
    grid = _j_fixture_grid()
    qa = check_quasi_adjunction(ExternalCriterion({"x1": True}), grid)
    qa_report = qa.report if qa.mode == "isomorphism" else qa.report.merged(
        Report("", (Finding("j-mode", f"expected isomorphism, got {qa.mode}", ()),))
    )
    emptiness = builtin_adjunction("emptiness", 3)
    discrete = builtin_adjunction("discrete_order", 2)
    q = RationalField()
    edges = (
        TowerEdge(0, 1, J_RELATIVE, None, "quasi-adjunction", qa_report),
        TowerEdge(1, 2, INTERNAL, emptiness, "adjunction", verify_adjunction(emptiness)),
        TowerEdge(2, 3, INTERNAL, discrete, "adjunction", verify_adjunction(discrete)),
        TowerEdge(3, 4, INTERNAL, None, "free-ring", check_free_ring_universal(["x", "y"], zmod(3))),
        TowerEdge(4, 5, INTERNAL, None, "fraction-field", check_frac_extension(q.embed, q)),
        TowerEdge(5, 6, INTERNAL, None, None, None),
    )
    return Tower(nodes, edges)


def tower_to_dict(t: Tower) -> dict:
    d = completion_descriptor()
    return {
        "nodes": [{"level": n.level, "label": n.label} for n in t.nodes],
        "edges": [
            {
                "from": e.source,
                "to": e.target,
                "kind": e.kind,
                "witness": e.witness,
                "verdict": None if e.report is None else e.report.verdict,
            }
            for e in t.edges
        ],
        "completion": {
            "level": d.level,
            "idempotent": d.idempotent,
            "law": d.idempotency_law,
            "numeric": d.numeric,
        },
    }
