"""Exact-rational exponent-pair calculus.

Starting from the trivial pair (0, 1), the transforms

    A(k, l) = (k/(2k+2), (k+l+1)/(2k+2))        B(k, l) = (l - 1/2, k + 1/2)

generate the classical exponent-pair family.  Words over {A, B} are applied
rightmost letter first, the convention pinned by ABAAB(0,1) = ABABABA(0,1)
= (1/9, 13/18).  Everything is fractions.Fraction: numerators and
denominators grow roughly geometrically with word length, so word length 25
already overflows 64-bit denominators.

The quantity to minimize over the family is

    f(k, l) = (2k + 1) / (4 + 2k - 2l),

whose infimum is bracketed by applying the 25-letter word
ABABABA^3BA^2BABABA^2BABABA to (0, 1) from above and to the formal seed
(0, 1/2) from below.  The associated threshold is

    mu(k, l; Delta, q) = max(Delta^(-1/(4+2k-2l)) q^((2k+1)/(4+2k-2l)),
                             Delta^(-1/(2+2k-2l)) q^(2k/(2+2k-2l))).
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ExponentPair",
    "SearchResult",
    "apply_A",
    "apply_B",
    "apply_word",
    "parse_word",
    "objective_f",
    "mu_threshold",
    "search_min_f",
    "remark_bracket",
    "remark_bracket_decimals",
    "REMARK_WORD",
    "round_decimal",
]

HALF = Fraction(1, 2)

# The bracketing word from the interval (0.439875556384, 0.439875557961).
REMARK_WORD = "ABABABA3BA2BABABA2BABABA"


@dataclass(frozen=True)
class ExponentPair:
    """A pair (k, l) with the word of transforms that produced it."""

    k: Fraction
    l: Fraction
    word: str = ""

    @property
    def in_region(self) -> bool:
        """0 <= k <= 1/2 <= l <= 1 (always true for descendants of (0, 1))."""
        return 0 <= self.k <= HALF <= self.l <= 1

    def __str__(self):
        return f"{self.k},{self.l}"

    def decimal_str(self) -> str:
        return f"k={float(self.k):.15f} l={float(self.l):.15f}"


def _A(k: Fraction, l: Fraction) -> tuple[Fraction, Fraction]:
    d = 2 * k + 2
    return k / d, (k + l + 1) / d


def _B(k: Fraction, l: Fraction) -> tuple[Fraction, Fraction]:
    return l - HALF, k + HALF


def apply_A(pair: ExponentPair) -> ExponentPair:
    """(k, l) -> (k/(2k+2), (k+l+1)/(2k+2)); prepends A to the word."""
    k, l = _A(pair.k, pair.l)
    return ExponentPair(k, l, "A" + pair.word)


def apply_B(pair: ExponentPair) -> ExponentPair:
    """(k, l) -> (l - 1/2, k + 1/2); an involution."""
    k, l = _B(pair.k, pair.l)
    return ExponentPair(k, l, "B" + pair.word)


_WORD_RE = re.compile(r"([AB])(\d*)")


def parse_word(word: str) -> str:
    """Expand exponent shorthand: 'ABA2B' -> 'ABAAB', 'A3' -> 'AAA'."""
    if not re.fullmatch(r"(?:[AB]\d*)*", word):
        raise ValueError(f"malformed word {word!r}: expected letters A/B with optional repeat counts")
    out = []
    for letter, count in _WORD_RE.findall(word):
        out.append(letter * (int(count) if count else 1))
    return "".join(out)


def apply_word(word: str, seed: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))) -> ExponentPair:
    """Apply a word rightmost letter first to a (possibly formal) seed."""
    expanded = parse_word(word)
    k, l = Fraction(seed[0]), Fraction(seed[1])
    for ch in reversed(expanded):
        k, l = _A(k, l) if ch == "A" else _B(k, l)
    return ExponentPair(k, l, expanded)


def _f(k: Fraction, l: Fraction) -> Fraction:
    den = 4 + 2 * k - 2 * l
    if den <= 0:
        raise ValueError(f"objective undefined: 4 + 2k - 2l = {den} <= 0 at ({k}, {l})")
    return (2 * k + 1) / den


def objective_f(pair: ExponentPair | tuple[Fraction, Fraction]) -> Fraction:
    """f(k, l) = (2k+1)/(4+2k-2l), exact."""
    k, l = (pair.k, pair.l) if isinstance(pair, ExponentPair) else (Fraction(pair[0]), Fraction(pair[1]))
    return _f(k, l)


def mu_threshold(pair: ExponentPair, Delta: float, q: int) -> float:
    """max(Delta^(-1/(4+2k-2l)) q^((2k+1)/(4+2k-2l)), Delta^(-1/(2+2k-2l)) q^(2k/(2+2k-2l))).

    For the degenerate family edge l - k = 1 (e.g. the trivial pair), the
    second branch's exponent denominator vanishes: the underlying N-condition
    is then satisfiable only when Delta^(-1) q^(2k) <= 1, so the branch
    contributes 1 in that case and +inf otherwise.
    """
    if not 0 < Delta <= 1:
        raise ValueError(f"Delta must lie in (0, 1], got {Delta}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    k, l = float(pair.k), float(pair.l)
    d1 = 4 + 2 * k - 2 * l
    if d1 <= 0:
        raise ValueError(f"pair ({pair.k}, {pair.l}) outside the domain: 4 + 2k - 2l <= 0")
    term1 = Delta ** (-1 / d1) * q ** ((2 * k + 1) / d1)
    d2 = 2 + 2 * k - 2 * l
    if d2 > 0:
        term2 = Delta ** (-1 / d2) * q ** (2 * k / d2)
    elif d2 == 0:
        term2 = 1.0 if q ** (2 * k) / Delta <= 1 else math.inf
    else:
        raise ValueError(f"pair ({pair.k}, {pair.l}) outside the domain: 2 + 2k - 2l < 0")
    return max(term1, term2)


@dataclass
class SearchResult:
    best_pair: ExponentPair
    best_f: Fraction
    nodes_expanded: int
    frontier_bound: Fraction


def search_min_f(node_budget: int) -> SearchResult:
    """Minimize f over the pairs generated from (0, 1), within a node budget.

    Nodes (deduplicated on exact (k, l); B is an involution and (0, 1) is
    A-fixed) are expanded shortest-word-first, with the exact objective and
    then the word as tie-breaks.  Ordering by objective alone looks natural
    but diverges: the A,B-alternating chain has objective values decreasing
    toward ~0.4401216 forever, while every better pair sits behind an
    ancestor of larger objective (~0.45+) that would never get expanded.
    Length-first order visits every reachable pair eventually, and the
    deterministic expansion order makes best_f non-increasing in the budget.

    The returned frontier_bound is the smallest objective currently sitting
    on the unexpanded frontier (informational; descendants may go lower).
    """
    if node_budget < 1:
        raise ValueError(f"node_budget must be >= 1, got {node_budget}")
    k0, l0 = Fraction(0), Fraction(1)
    heap: list[tuple[int, Fraction, str, Fraction, Fraction]] = [(0, _f(k0, l0), "", k0, l0)]
    visited = {(k0, l0)}
    best_f: Fraction | None = None
    best_pair: ExponentPair | None = None
    popped = 0
    while heap and popped < node_budget:
        _, f, word, k, l = heapq.heappop(heap)
        popped += 1
        if best_f is None or f < best_f:
            best_f = f
            best_pair = ExponentPair(k, l, word)
        for tag, (nk, nl) in (("A", _A(k, l)), ("B", _B(k, l))):
            if (nk, nl) not in visited:
                visited.add((nk, nl))
                nw = tag + word
                heapq.heappush(heap, (len(nw), _f(nk, nl), nw, nk, nl))
    frontier = min((entry[1] for entry in heap), default=best_f)
    return SearchResult(best_pair, best_f, popped, frontier)


def remark_bracket() -> tuple[Fraction, Fraction]:
    """(f_lower, f_upper): the 25-letter bracketing word applied to the formal
    seed (0, 1/2) and to the exponent pair (0, 1).

    The exact values are 0.43987555638414... and 0.43987555796023...; printed
    as an enclosing interval at 12 decimal places (lower rounded down, upper
    rounded up) they read (0.439875556384, 0.439875557961)."""
    lower = objective_f(apply_word(REMARK_WORD, (Fraction(0), HALF)))
    upper = objective_f(apply_word(REMARK_WORD, (Fraction(0), Fraction(1))))
    return lower, upper


def remark_bracket_decimals(places: int = 12) -> tuple[str, str]:
    """The bracket endpoints outward-rounded to `places` decimal digits."""
    lower, upper = remark_bracket()
    return round_decimal(lower, places, "floor"), round_decimal(upper, places, "ceil")


def round_decimal(x: Fraction, places: int = 12, mode: str = "half_up") -> str:
    """Decimal string of x at `places` digits, rounded exactly.

    mode: 'half_up' for ordinary rounding, 'floor'/'ceil' for the directed
    rounding used when printing enclosing interval endpoints.
    """
    scaled = Fraction(x) * 10 ** places
    if mode == "half_up":
        n = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    elif mode == "floor":
        n = scaled.numerator // scaled.denominator
    elif mode == "ceil":
        n = -((-scaled.numerator) // scaled.denominator)
    else:
        raise ValueError(f"unknown rounding mode {mode!r}")
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10 ** places}.{n % 10 ** places:0{places}d}"
