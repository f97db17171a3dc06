"""Closed-form resistances for named families, in exact Fibonacci arithmetic.

Every formula here is checked against the exact Laplacian backend in the test
suite.  Where a printed formula fails that check, the corrected form is the
default and the printed one stays reachable through ``as_printed=True``.

Vertex arguments use the families' 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import time
from math import exp
from typing import Optional, Sequence

from .graph import EXACT, GraphError


class OutOfDomainError(GraphError):
    """The formula does not cover this vertex pair; use an exact backend."""


_FIB = [0, 1]


def fib(k: int) -> int:
    """``F_k`` with ``F_0 = 0, F_1 = 1`` and ``F_{-k} = (-1)^(k+1) F_k``."""
    if k < 0:
        return fib(-k) if (-k) % 2 else -fib(-k)
    while len(_FIB) <= k:
        _FIB.append(_FIB[-1] + _FIB[-2])
    return _FIB[k]


def lucas(k: int) -> int:
    return fib(k - 1) + fib(k + 1)


# ---------------------------------------------------------------------------
# linear 2-trees
# ---------------------------------------------------------------------------

def _check_pair(n, u, v):
    if not (1 <= u <= n and 1 <= v <= n):
        raise GraphError(f"vertices must be in 1..{n}")
    if u == v:
        raise GraphError("u and v must differ")


def straight_2tree_forests(n: int, u: int, v: int) -> int:
    """``F_{S_n}(u, v)``: the numerator of the straight 2-tree formula."""
    _check_pair(n, u, v)
    if u > v:
        u, v = v, u
    return sum(
        (fib(i) * fib(i + 2 * u - 2) - fib(i - 1) * fib(i + 2 * u - 3)) * fib(2 * n - 2 * i - 2 * u + 1)
        for i in range(1, v - u + 1)
    )


def straight_2tree_resistance(n: int, u: int, v: int) -> Fraction:
    if n < 3:
        raise GraphError("S_n needs n >= 3")
    if u >= v:
        raise GraphError("need u < v")
    return Fraction(straight_2tree_forests(n, u, v), fib(2 * n - 2))


def bent_2tree_window(bends: Sequence[int], u: int, v: int) -> tuple[int, int]:
    """``(p1, p2)`` with ``k_{p1} < u <= k_{p1+1}`` and ``k_{p1+p2} < v <= k_{p1+p2+1}``."""
    ks = sorted(bends)
    p1 = sum(1 for k in ks if k < u)
    p12 = sum(1 for k in ks if k < v)
    return p1, p12 - p1


def bent_2tree_correction(
    n: int, bends: Sequence[int], u: int, v: int, reading: str = "k_i", as_printed: bool = False
) -> int:
    """Amount subtracted from ``F_{S_n}(u, v)`` for the bends between ``u`` and ``v``.

    ``reading`` picks the inner-sum subscript, ``"k_i"`` or ``"k_{p1+i}"``
    (the two printed versions disagree; ``"k_i"`` is the one that holds).
    The sign ``(-1)^(j+u+k_j)`` needs ``j`` counted from the first bend after
    ``u``; ``as_printed=True`` uses the absolute index, which is wrong
    whenever an odd number of bends precede ``u``.
    """
    ks = [None] + sorted(bends)  # 1-based
    p1, p2 = bent_2tree_window(bends, u, v)
    total = 0
    for j in range(p1 + 1, p1 + p2 + 1):
        kj = ks[j]
        inner = 0
        for i in range(p1 + 1, j):
            idx = i if reading == "k_i" else p1 + i
            if idx >= len(ks):
                raise OutOfDomainError("inner subscript runs past the last bend")
            ki = ks[idx]
            inner += (-1) ** ((kj - ks[i] + j - i) % 2) * fib(ki) * fib(ki - 3)
        js = j if as_printed else j - p1
        left = fib(kj - 3) * fib(kj) + 2 * inner + 2 * (-1) ** ((js + u + kj) % 2) * fib(u - 1) ** 2
        right = fib(n - kj + 2) * fib(n - kj - 1) + 2 * (-1) ** ((v - kj) % 2) * fib(n - v) ** 2
        total += left * right
    return total


def bent_2tree_forests(n: int, bends: Sequence[int], u: int, v: int, reading: str = "k_i", as_printed: bool = False) -> int:
    if u > v:
        u, v = v, u
    return straight_2tree_forests(n, u, v) - bent_2tree_correction(n, bends, u, v, reading, as_printed)


def bent_2tree_resistance(
    n: int, bends: Sequence[int], u: int, v: int, reading: str = "k_i", as_printed: bool = False
) -> Fraction:
    """Resistance in the bent linear 2-tree; the tree count is unchanged by bends, so ``T = F_{2n-2}``."""
    from .families import validate_bends

    bends = validate_bends(n, bends)
    _check_pair(n, u, v)
    return Fraction(bent_2tree_forests(n, bends, u, v, reading, as_printed), fib(2 * n - 2))


# ---------------------------------------------------------------------------
# fan and wheel
# ---------------------------------------------------------------------------

def fan_hub_resistance(n: int, i: int, as_printed: bool = False) -> Fraction:
    """``r_{F_n}(i, n+1)``.

    The printed sum ``(F_{2(n-i)+1} + F_{2i-1}) / F_{2n}`` gives 1 at n=2
    where the truth is 2/3; the product form is exact.
    """
    if not 1 <= i <= n:
        raise GraphError(f"rim vertex must be in 1..{n}")
    a, b = fib(2 * (n - i) + 1), fib(2 * i - 1)
    num = a + b if as_printed else a * b
    return Fraction(num, fib(2 * n))


def fan_resistance(n: int, i: int, j: int, as_printed: bool = False) -> Fraction:
    """Any pair of the fan ``F_n``; label ``n+1`` is the hub."""
    if i == j:
        return Fraction(0)
    if i > j:
        i, j = j, i
    if j == n + 1:
        return fan_hub_resistance(n, i, as_printed)
    if not (1 <= i and j <= n):
        raise GraphError(f"vertices must be in 1..{n + 1}")
    num = fib(2 * (n - j) + 1) * (fib(2 * j - 1) - fib(2 * i - 1)) + fib(2 * i - 1) * (
        fib(2 * (n - i) + 1) - fib(2 * (n - j) + 1)
    )
    return Fraction(num, fib(2 * n))


def wheel_hub_resistance(n: int) -> Fraction:
    f = fib(2 * n)
    return Fraction(f * f, fib(4 * n) - 2 * f)


def wheel_resistance(n: int, i: int, j: int) -> Fraction:
    """Any pair of the wheel ``W_n``; label ``n+1`` is the hub."""
    if n < 3:
        raise GraphError("wheel needs n >= 3")
    if i == j:
        return Fraction(0)
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise GraphError(f"vertices must be in 1..{n + 1}")
    h = wheel_hub_resistance(n)
    if n + 1 in (i, j):
        return h
    k = min(abs(i - j), n - abs(i - j))
    return h * (2 - Fraction(fib(4 * k), fib(2 * k))) + fib(2 * k)


# ---------------------------------------------------------------------------
# complete flower
# ---------------------------------------------------------------------------

def flower_resistance(n: int, m: int, u_in_I: bool, v_in_I: bool, d: int, as_printed: bool = False) -> Fraction:
    """Three-case formula for ``F_n(K_m)``.

    ``I`` is the set of junction vertices and ``d`` counts petals from ``u``
    to ``v``, both ends' petals included (see :func:`flower_pair_d`).  The
    three cases read ``2d/m - (2d - e)^2 / (2mn)`` with ``e = 0, 1, 2`` for
    two, one or no junction endpoints.  The printed third case
    ``2d/m - (2d-1)^2/(mn)`` matches no ``d`` at all and is kept only behind
    ``as_printed``.
    """
    if n < 3 or m < 3:
        raise GraphError("flower needs n >= 3 and m >= 3")
    if not 1 <= d <= n:
        raise GraphError(f"d must be in 1..{n}")
    d = Fraction(d)
    if u_in_I and v_in_I:
        return 2 * d * (n - d) / (m * n)
    if u_in_I or v_in_I:
        return 2 * d / m - (2 * d - 1) ** 2 / (2 * m * n)
    if as_printed:
        return 2 * d / m - (2 * d - 1) ** 2 / (m * n)
    return 2 * d / m - (2 * d - 2) ** 2 / (2 * m * n)


def flower_pair_d(layout, u: int, v: int) -> tuple[bool, bool, int]:
    """``(u in I, v in I, d)`` for 0-based ids of :func:`families.complete_flower`.

    Junction ``j`` touches petals ``j`` and ``j+1``.  Counting petals the
    short way round, two junctions give the arc length, a junction and an
    interior vertex give the petals up to and including the interior
    vertex's petal, and two interior vertices give their petal distance
    plus one.  Each formula is symmetric under the long way round, so the
    choice of direction does not matter.
    """
    n = layout.n
    junction = {x: k for k, x in enumerate(layout.junctions)}
    petal = {x: k for k, p in enumerate(layout.petals) for x in p if x not in junction}
    uI, vI = u in junction, v in junction
    if u == v:
        raise GraphError("u and v must differ")
    if uI and vI:
        k = (junction[v] - junction[u]) % n
        return True, True, min(k, n - k)
    if uI or vI:
        j, x = (junction[u], petal[v]) if uI else (junction[v], petal[u])
        c = (x - j) % n or n
        return uI, vI, min(c, n + 1 - c)
    k = (petal[v] - petal[u]) % n
    return False, False, min(k, n - k) + 1


def complete_flower_resistance(n: int, m: int, u: int, v: int, as_printed: bool = False) -> Fraction:
    """Resistance between 0-based ids ``u``, ``v`` of the generated ``F_n(K_m)``."""
    from .families import complete_flower

    if u == v:
        return Fraction(0)
    _, layout = complete_flower(n, m)
    uI, vI, d = flower_pair_d(layout, u, v)
    return flower_resistance(n, m, uI, vI, d, as_printed)


# ---------------------------------------------------------------------------
# ladder
# ---------------------------------------------------------------------------

def ladder_end_resistances(n: int, check: bool = True) -> tuple[Fraction, Fraction, Fraction]:
    """``(r(1,2), r(1,2n-1), r(1,2n))`` on ``L_n`` from the integer recurrences."""
    from .combinatorics import ladder_five_sequence, ladder_rung_resistance_closed_form

    if n < 2:
        raise GraphError("need n >= 2")
    F, Ft, _, T, V = ladder_five_sequence(n)
    out = (Fraction(V, T), Fraction(Ft, T), Fraction(F, T))
    if check and abs(ladder_rung_resistance_closed_form(n) - float(out[0])) > 1e-10:
        raise ArithmeticError(f"closed form disagrees with the recurrence at n={n}")
    return out


# ---------------------------------------------------------------------------
# conjecture probes
# ---------------------------------------------------------------------------

CONJECTURE_LIMITS = {1: None, 2: Fraction(1, 4), 3: None, 4: None}


def ktree_limit(k: int) -> Fraction:
    return Fraction(6, k * (k + 1) * (2 * k + 1))


@dataclass
class ProbeRow:
    n: int
    value: object
    difference: Optional[object]
    target: Optional[object]
    extra: Optional[object] = None


def _exact_r(g, u, v):
    from .linalg import resistance_pseudoinverse

    return resistance_pseudoinverse(g, u, v)


def conjecture_probe(which: int, n_max: int, k: int = 2, n_min: Optional[int] = None,
                     budget: Optional[float] = None) -> list[ProbeRow]:
    """Successive differences next to the conjectured limit; makes no truth claim.

    With ``budget`` (seconds) the probe stops before starting a new ``n`` once
    the budget is spent, so the table may end early.

    1: straight linear k-tree, ``r(1, n+1) - r(1, n)`` against ``6/(k(k+1)(2k+1))``.
    2: block tower ``C_4 x P_n``, ``r(1, 4n+3) - r(1, 4n-1)`` against 1/4.
    3: ``n x n`` grid, differences of ``exp(r)`` between opposite corners.
    4: triangular grid, ``exp(r)`` differences between the corners ``a`` and
       ``b``; ``extra`` carries the lower bound ``(1/2) H_n``.
    """
    from .families import block_tower, grid, linear_ktree, triangular_corners, triangular_grid
    from .transforms import harmonic_lower_bound

    rows = []
    prev = None
    deadline = None if budget is None else time.monotonic() + budget

    def spent() -> bool:
        return deadline is not None and time.monotonic() > deadline

    if which == 1:
        start = n_min or k + 1
        target = ktree_limit(k)
        for n in range(start, n_max + 1):
            if spent():
                break
            if k == 2:
                r = straight_2tree_resistance(n, 1, n)
            else:
                r = _exact_r(linear_ktree(n, k), 0, n - 1)
            rows.append(ProbeRow(n, r, None if prev is None else r - prev, target))
            prev = r
    elif which == 2:
        for n in range(n_min or 1, n_max + 1):
            if spent():
                break
            r = _exact_r(block_tower(n), 0, 4 * n - 2)
            rows.append(ProbeRow(n, r, None if prev is None else r - prev, Fraction(1, 4)))
            prev = r
    elif which == 3:
        for n in range(n_min or 2, n_max + 1):
            if spent():
                break
            r = _exact_r(grid(n, n), 0, n * n - 1)
            e = exp(float(r))
            rows.append(ProbeRow(n, r, None if prev is None else e - prev, None, e))
            prev = e
    elif which == 4:
        for n in range(n_min or 1, n_max + 1):
            if spent():
                break
            a, b = triangular_corners(n)
            r = _exact_r(triangular_grid(n), a, b)
            e = exp(float(r))
            rows.append(ProbeRow(n, r, None if prev is None else e - prev, None, harmonic_lower_bound(n)))
            prev = e
    else:
        raise ValueError("conjecture must be 1, 2, 3 or 4")
    return rows


# ---------------------------------------------------------------------------
# family dispatch
# ---------------------------------------------------------------------------

CLOSED_FORM_FAMILIES = ("path", "cycle", "complete", "fan", "wheel", "straight2tree", "bent2tree", "flower")


def family_pair_resistance(spec, u: int, v: int, as_printed: bool = False) -> Fraction:
    """Closed-form resistance between 0-based ids ``u``, ``v`` of ``generate(spec)``."""
    f, p = spec.family, spec.params
    if u == v:
        return Fraction(0)
    a, b = min(u, v) + 1, max(u, v) + 1  # 1-based labels
    if f == "path":
        return Fraction(b - a)
    if f == "cycle":
        k = b - a
        return Fraction(k * (p["n"] - k), p["n"])
    if f == "complete":
        return Fraction(2, p["n"])
    if f == "fan":
        return fan_resistance(p["n"], a, b, as_printed)
    if f == "wheel":
        return wheel_resistance(p["n"], a, b)
    if f == "straight2tree":
        return straight_2tree_resistance(p["n"], a, b)
    if f == "bent2tree":
        return bent_2tree_resistance(p["n"], p["bends"], a, b, as_printed=as_printed)
    if f == "flower":
        return complete_flower_resistance(p["n"], p["m"], u, v, as_printed)
    raise OutOfDomainError(f"no closed form for family {f!r}; available: {', '.join(CLOSED_FORM_FAMILIES)}")


def family_closed_form(spec, as_printed: bool = False):
    """All pairs of ``generate(spec)`` from the family's closed form."""
    from .families import generate
    from .report import ResistanceReport

    if spec.family not in CLOSED_FORM_FAMILIES:
        raise OutOfDomainError(f"no closed form for family {spec.family!r}")
    n = generate(spec).n
    vals = {(i, j): family_pair_resistance(spec, i, j, as_printed) for i in range(n) for j in range(i + 1, n)}
    return ResistanceReport(n, vals, "closed-form", EXACT)
