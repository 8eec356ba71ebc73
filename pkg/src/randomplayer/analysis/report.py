"""Checker verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    SAMPLED_YES = "SampledYes"
    SAMPLED_NO = "SampledNo"
    UNEVALUATED = "Unevaluated"

    def __str__(self) -> str:
        return self.value


@dataclass
class CheckReport:
    property: str
    verdict: Verdict
    witness: Any = None
    cost: int = 0
    flags: list[str] = field(default_factory=list)
    note: str = ""

    @property
    def yes(self) -> bool:
        return self.verdict in (Verdict.YES, Verdict.SAMPLED_YES)

    @property
    def exact(self) -> bool:
        return self.verdict in (Verdict.YES, Verdict.NO)

    def render(self) -> str:
        lines = [f"property: {self.property}", f"verdict: {self.verdict}"]
        if self.flags:
            lines.append("flags: " + ",".join(self.flags))
        if self.witness is not None:
            lines.append(f"witness: {_fmt(self.witness)}")
        lines.append(f"cost: {self.cost}")
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def _fmt(w) -> str:
    if isinstance(w, tuple) and len(w) == 2 and all(isinstance(x, int) for x in w):
        return f"{w[0]}-{w[1]}"
    if isinstance(w, (set, frozenset)):
        return "{" + ",".join(str(x) for x in sorted(w)) + "}"
    if isinstance(w, (list, tuple)):
        return " ".join(_fmt(x) for x in w)
    return str(w)
