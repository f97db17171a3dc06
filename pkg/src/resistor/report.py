from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .graph import EXACT, format_decimal, format_scalar


@dataclass(frozen=True)
class ResistanceReport:
    """Resistances keyed by unordered vertex pair ``(i, j)`` with ``i < j``, plus provenance."""

    n: int
    values: dict
    backend: str
    mode: str = EXACT
    trace: Optional[Any] = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_matrix(cls, omega, backend: str, mode: str = EXACT, **kw) -> "ResistanceReport":
        n = len(omega)
        vals = {}
        for i in range(n):
            for j in range(i + 1, n):
                x = omega[i][j]
                vals[(i, j)] = float(x) if mode != EXACT else x
        return cls(n, vals, backend, mode, **kw)

    def __getitem__(self, pair):
        i, j = pair
        if i == j:
            return Fraction(0) if self.mode == EXACT else 0.0
        return self.values[(min(i, j), max(i, j))]

    def get(self, i, j):
        return self[(i, j)]

    def matrix(self):
        if self.mode == EXACT:
            out = [[Fraction(0)] * self.n for _ in range(self.n)]
        else:
            out = np.zeros((self.n, self.n))
        for (i, j), x in self.values.items():
            out[i][j] = x
            out[j][i] = x
        return out

    def kirchhoff_index(self):
        return sum(self.values.values())

    def max_discrepancy(self, other: "ResistanceReport") -> float:
        worst = 0.0
        for key, x in self.values.items():
            if key in other.values:
                diff = x - other.values[key]
                worst = max(worst, abs(float(diff)) if diff != 0 else 0.0)
        return worst

    def to_rows(self, one_based: bool = True):
        off = 1 if one_based else 0
        return [
            {"u": i + off, "v": j + off, "exact": format_scalar(x) if isinstance(x, Fraction) else None,
             "value": format_decimal(x)}
            for (i, j), x in sorted(self.values.items())
        ]
