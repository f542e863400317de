"""Verification reports: one JSON line per checked instance."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass
class Record:
    family: str
    p: int
    indices: dict[str, Any]
    status: str
    witness: Any = None

    def to_dict(self) -> dict[str, Any]:
        d = {"family": self.family, "p": self.p, "indices": self.indices, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass
class Report:
    family: str
    p: int
    records: list[Record] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, ok: bool, witness: Any = None, **indices: Any) -> bool:
        self.records.append(Record(self.family, self.p, indices, "pass" if ok else "fail",
                                   None if ok else witness))
        return ok

    def extend(self, other: "Report") -> "Report":
        self.records.extend(other.records)
        self.notes.extend(other.notes)
        return self

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status != "pass"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __len__(self) -> int:
        return len(self.records)

    def lines(self) -> Iterable[str]:
        for r in self.records:
            yield r.to_json()

    def summary(self) -> dict[str, Any]:
        return {"family": self.family, "p": self.p, "checked": len(self.records),
                "failed": len(self.failures), "notes": self.notes}

    def __str__(self) -> str:
        s = self.summary()
        return f"{s['family']} p={s['p']}: {s['checked']} checked, {s['failed']} failed"


def merge(family: str, p: int, reports: Iterable[Report]) -> Report:
    out = Report(family, p)
    for r in reports:
        out.extend(r)
    return out
