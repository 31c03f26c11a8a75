"""Findings and reports returned by the law checkers."""
from __future__ import annotations

from dataclasses import dataclass, field

ERROR = "error"
WARNING = "warning"
INFO = "info"


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    location: tuple = ()
    severity: str = ERROR

    def to_dict(self):
        return {
            "code": self.code,
            "message": self.message,
            "location": [_plain(x) for x in self.location],
            "severity": self.severity,
        }


def _plain(x):
    if isinstance(x, (tuple, list, frozenset, set)):
        items = sorted(x, key=str) if isinstance(x, (frozenset, set)) else x
        return [_plain(i) for i in items]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


@dataclass(frozen=True)
class Report:
    """An ordered list of findings about one subject.

    A report is *ok* when it carries no error-severity finding; warnings and
    informational findings do not fail it.
    """

    subject: str = ""
    findings: tuple[Finding, ...] = ()
    data: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return not any(f.severity == ERROR for f in self.findings)

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == ERROR)

    @property
    def verdict(self) -> str:
        if not self.ok:
            return "fail"
        if any(f.severity == WARNING for f in self.findings):
            return "warn"
        return "pass"

    def codes(self) -> set[str]:
        return {f.code for f in self.errors}

    def locations(self, code: str | None = None) -> list[tuple]:
        return [f.location for f in self.errors if code is None or f.code == code]

    def __bool__(self):
        return self.ok

    def __len__(self):
        return len(self.errors)

    def __iter__(self):
        return iter(self.errors)

    def merged(self, *others: "Report", subject: str | None = None) -> "Report":
        fs = list(self.findings)
        for o in others:
            fs.extend(o.findings)
        return Report(self.subject if subject is None else subject, tuple(fs), dict(self.data))

    def to_dict(self):
        return {
            "subject": self.subject,
            "verdict": self.verdict,
            "findings": [f.to_dict() for f in self.findings],
        }


def report(subject: str, findings, **data) -> Report:
    return Report(subject, tuple(findings), data)
