"""The recurrence-coefficient table exchanged between modules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .scalar import ExactScalar, as_scalar


@dataclass(frozen=True)
class RecurrenceTable:
    """Coefficients of ``P_{n+1} = (z - B_n) P_n - C_n P_{n-1}``.

    ``B`` holds B_0..B_N and ``C`` holds C_1..C_N (so ``C[0]`` is C_1).  ``h``
    holds the norms h_0..h_N with ``h_n = m_0 C_1 ... C_n``.
    """

    B: tuple
    C: tuple
    h: tuple = field(default=())
    checked_to: Optional[int] = None

    @classmethod
    def build(cls, B, C, m0=1, checked_to=None) -> "RecurrenceTable":
        B = tuple(as_scalar(b) for b in B)
        C = tuple(as_scalar(c) for c in C)
        h = [as_scalar(m0)]
        for c in C:
            h.append(h[-1] * c)
        return cls(B, C, tuple(h), len(B) - 1 if checked_to is None else checked_to)

    @property
    def order(self) -> int:
        return len(self.B) - 1

    def c(self, n: int) -> ExactScalar:
        """C_n indexed from 1."""
        return self.C[n - 1]

    def truncated(self, n: int) -> "RecurrenceTable":
        return RecurrenceTable.build(self.B[: n + 1], self.C[:n], self.h[0] if self.h else 1, n)

    def same_coefficients(self, other: "RecurrenceTable", n: Optional[int] = None) -> bool:
        n = min(self.order, other.order) if n is None else n
        return self.B[: n + 1] == other.B[: n + 1] and self.C[:n] == other.C[:n]

    def to_json(self) -> dict:
        return {
            "B": [str(x) for x in self.B],
            "C": [str(x) for x in self.C],
            "h": [str(x) for x in self.h],
            "checked_to": self.checked_to,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "RecurrenceTable":
        return cls(
            tuple(as_scalar(x) for x in data["B"]),
            tuple(as_scalar(x) for x in data["C"]),
            tuple(as_scalar(x) for x in data.get("h", ())),
            data.get("checked_to"),
        )
