"""Named resistance backends and cross-backend comparison."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from .alt_solvers import local_rules_solve, resistance_matrix_energy, resistance_matrix_simplex
from .combinatorics import resistance_matrix_by_counts
from .graph import EXACT, FLOAT, GraphError, WeightedMultigraph, require_connected
from .incremental import resistance_matrix_incremental
from .linalg import resistance_matrix
from .report import ResistanceReport
from .transforms import reduce_two_terminal


class NotReducedError(RuntimeError):
    """The transformation driver could not finish a pair, even with star-mesh enabled."""


def transform_resistance(g: WeightedMultigraph, s: int, t: int):
    """Two-terminal resistance by rewriting; returns ``(value, trace, used_star_mesh)``."""
    red = reduce_two_terminal(g, s, t)
    if red.reduced:
        return red.resistance, red.trace, False
    red = reduce_two_terminal(g, s, t, use_star_mesh=True)
    if red.reduced:
        return red.resistance, red.trace, True
    raise NotReducedError(f"pair ({s}, {t}) did not reduce")


def resistance_matrix_transform(g: WeightedMultigraph) -> ResistanceReport:
    require_connected(g)
    vals, star = {}, []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            vals[(i, j)], _, used = transform_resistance(g, i, j)
            if used:
                star.append((i, j))
    return ResistanceReport(g.n, vals, "transform", g.mode, meta={"star_mesh_pairs": star})


def _counts(method, name):
    def run(g):
        return replace(resistance_matrix_by_counts(g, method=method), backend=name)
    return run


def _simplex(g):
    return resistance_matrix_simplex(g.to_mode(FLOAT))


BACKENDS: dict[str, Callable[[WeightedMultigraph], ResistanceReport]] = {
    "pseudoinverse": resistance_matrix,
    "counts": _counts("det", "counts"),
    "counts-det": _counts("det", "counts-det"),
    "counts-enum": _counts("enum", "counts-enum"),
    "transform": resistance_matrix_transform,
    "incremental": resistance_matrix_incremental,
    "local-rules": local_rules_solve,
    "energy": resistance_matrix_energy,
    "simplex": _simplex,
}

# backends that return exact rationals on exact input
EXACT_BACKENDS = ("pseudoinverse", "counts", "transform", "incremental", "local-rules", "energy")


def get_backend(name: str):
    try:
        return BACKENDS[name]
    except KeyError:
        raise GraphError(f"unknown backend {name!r}; choose from {', '.join(BACKENDS)}") from None


def compute(g: WeightedMultigraph, backend: str = "pseudoinverse") -> ResistanceReport:
    return get_backend(backend)(g)


@dataclass
class Comparison:
    reports: dict
    discrepancies: dict = field(default_factory=dict)

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies.values(), default=0.0)

    def agree(self, tol: float = 0.0) -> bool:
        return self.max_discrepancy <= tol


def compare(g: WeightedMultigraph, backends: Optional[Iterable[str]] = None,
            reference: str = "pseudoinverse") -> Comparison:
    """Run several backends and record each one's worst gap to ``reference``.

    Exact backends are compared by exact equality (the gap is 0 or the
    float size of the difference); the simplex backend is float.
    """
    if backends is not None:
        names = list(backends)
    else:
        names = list(EXACT_BACKENDS) if g.mode == EXACT else [b for b in BACKENDS if b != "counts-det"]
    if reference not in names:
        names.insert(0, reference)
    reports = {name: compute(g, name) for name in names}
    ref = reports[reference]
    gaps = {name: ref.max_discrepancy(rep) for name, rep in reports.items() if name != reference}
    return Comparison(reports, gaps)
