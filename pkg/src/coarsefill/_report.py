"""Check records shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

STATUSES = ("pass", "fail", "demonstrated", "aborted")


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # pass | fail | demonstrated | aborted
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "demonstrated")

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


def status(ok: bool) -> str:
    return "pass" if ok else "fail"
