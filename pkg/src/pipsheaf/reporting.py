"""Pass/fail records shared by the law checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    check: str  # name of the function that produced the verdict
    passed: bool
    detail: str = ""
    informational: bool = False

    def line(self) -> str:
        if self.informational:
            status = "INFO"
        else:
            status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.detail}" if self.detail else f"[{status}]"
        return f"{text}  (check: {self.check})"


@dataclass
class Report:
    title: str
    results: list[CheckResult] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    tables: list[str] = field(default_factory=list)

    def add(self, check: str, passed: bool, detail: str = "") -> bool:
        self.results.append(CheckResult(check, bool(passed), detail))
        return bool(passed)

    def info(self, check: str, detail: str) -> None:
        self.results.append(CheckResult(check, True, detail, informational=True))

    def extend(self, other: "Report") -> None:
        self.results.extend(other.results)
        self.tables.extend(other.tables)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def text(self) -> str:
        out = [f"== {self.title} =="]
        out.extend(self.tables)
        out.extend(r.line() for r in self.results)
        return "\n".join(out)
