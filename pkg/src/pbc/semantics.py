"""Exact probabilistic semantics over Boolean wires.

A morphism between star-free objects denotes a stochastic map: for every
input bitstring, a finitely supported distribution over output bitstrings
with exact rational weights.  Bitstrings are packed into ints; wire 1 is
the most significant bit, so sorting ints sorts bitstrings left to right.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .objects import is_star_free, width
from .terms import (
    COIN, COPY, DISCARD, PHI, Gen, Id, Par, PBCError, Seq, Swap, TauStar,
    Term, typecheck,
)

__all__ = [
    "Distribution", "StochMap",
    "dirac", "bernoulli", "distribution",
    "compose_maps", "tensor_maps", "identity_map", "apply_map",
    "tv_distance", "tv_distance_overlap", "hom_distance",
    "denote", "map_to_tsv", "WireLimitError",
    "HARD_WIRE_LIMIT", "SOFT_WIRE_LIMIT",
]

ZERO = Fraction(0)
ONE = Fraction(1)

HARD_WIRE_LIMIT = 20
SOFT_WIRE_LIMIT = 14

# Distribution: dict[int, Fraction] with positive entries summing to one.
Distribution = dict


class WireLimitError(PBCError):
    """A denotation would exceed the configured wire budget."""


def _wire_limit() -> int:
    raw = os.environ.get("PBC_MAX_WIRES")
    if raw is None:
        return HARD_WIRE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise PBCError(f"PBC_MAX_WIRES must be an integer, got {raw!r}")


def _check_width(n: int, what: str) -> None:
    limit = _wire_limit()
    if n > limit:
        raise WireLimitError(
            f"{what} needs {n} wires, above the limit of {limit} "
            "(set PBC_MAX_WIRES to raise it)")
    if n >= SOFT_WIRE_LIMIT:
        warnings.warn(
            f"{what} uses {n} wires; expect slow exact arithmetic",
            stacklevel=3)


def distribution(items) -> Distribution:
    """Build a validated distribution from (value, weight) pairs."""
    out: Distribution = {}
    for value, p in items:
        p = Fraction(p)
        if p < 0:
            raise ValueError(f"negative weight {p} at {value}")
        if p:
            out[value] = out.get(value, ZERO) + p
    if sum(out.values(), ZERO) != ONE:
        raise ValueError("distribution weights do not sum to 1")
    return out


def dirac(value: int) -> Distribution:
    return {value: ONE}


def bernoulli(p) -> Distribution:
    """Distribution on one wire that is 1 with probability p."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"bias {p} outside [0, 1]")
    out: Distribution = {}
    if p:
        out[1] = p
    if p != 1:
        out[0] = ONE - p
    return out


@dataclass(frozen=True, slots=True)
class StochMap:
    """A stochastic map on packed bitstrings.

    ``rows`` has one distribution per input, indexed densely by the input
    int; each row is a sparse dict over output ints.
    """

    in_arity: int
    out_arity: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != 1 << self.in_arity:
            raise ValueError(
                f"expected {1 << self.in_arity} rows, got {len(self.rows)}")

    def row(self, value: int) -> Distribution:
        return self.rows[value]

    def __str__(self):
        return map_to_tsv(self)


def _validate_rows(rows) -> None:
    for row in rows:
        if sum(row.values(), ZERO) != ONE:
            raise ValueError("row weights do not sum to 1")
        if any(p <= 0 for p in row.values()):
            raise ValueError("rows must carry positive weights only")


def stoch_map(in_arity: int, out_arity: int, rows) -> StochMap:
    rows = tuple(dict(r) for r in rows)
    _validate_rows(rows)
    return StochMap(in_arity, out_arity, rows)


def identity_map(n: int) -> StochMap:
    return StochMap(n, n, tuple(dirac(i) for i in range(1 << n)))


def compose_maps(f: StochMap, g: StochMap) -> StochMap:
    """Sequential composition: run f, feed its sample to g."""
    if f.out_arity != g.in_arity:
        raise ValueError(
            f"cannot compose {f.in_arity}->{f.out_arity} "
            f"with {g.in_arity}->{g.out_arity}")
    rows = []
    for row in f.rows:
        out: Distribution = {}
        for mid, p in row.items():
            for result, q in g.rows[mid].items():
                out[result] = out.get(result, ZERO) + p * q
        rows.append(out)
    return StochMap(f.in_arity, g.out_arity, tuple(rows))


def tensor_maps(f: StochMap, g: StochMap) -> StochMap:
    """Parallel composition: independent product, f on the left wires."""
    n = f.in_arity + g.in_arity
    _check_width(max(n, f.out_arity + g.out_arity), "a tensor")
    rows = []
    for i in range(1 << f.in_arity):
        frow = f.rows[i]
        for j in range(1 << g.in_arity):
            grow = g.rows[j]
            out: Distribution = {}
            for a, p in frow.items():
                base = a << g.out_arity
                for b, q in grow.items():
                    out[base | b] = p * q
            rows.append(out)
    return StochMap(n, f.out_arity + g.out_arity, tuple(rows))


def apply_map(f: StochMap, arg) -> Distribution:
    """Push a distribution (or a single input int) through a map."""
    if isinstance(arg, int):
        arg = dirac(arg)
    out: Distribution = {}
    for value, p in arg.items():
        for result, q in f.rows[value].items():
            out[result] = out.get(result, ZERO) + p * q
    return out


# ---------------------------------------------------------------------------
# Distances.

def tv_distance(v: Distribution, w: Distribution) -> Fraction:
    """Total variation distance, as half the pointwise difference mass.

    The overlap form ``1 - sum(min)`` is asserted to agree; the assert
    vanishes under ``python -O``.
    """
    keys = set(v) | set(w)
    total = sum((abs(v.get(k, ZERO) - w.get(k, ZERO)) for k in keys), ZERO)
    result = total / 2
    assert result == tv_distance_overlap(v, w)
    return result


def tv_distance_overlap(v: Distribution, w: Distribution) -> Fraction:
    """Total variation distance as one minus the overlapping mass."""
    common = set(v) & set(w)
    overlap = sum((min(v[k], w[k]) for k in common), ZERO)
    return ONE - overlap


def hom_distance(f: StochMap, g: StochMap) -> Fraction:
    """Largest row-wise total variation distance over all inputs."""
    if (f.in_arity, f.out_arity) != (g.in_arity, g.out_arity):
        raise ValueError("hom_distance needs maps of equal type")
    best = ZERO
    for frow, grow in zip(f.rows, g.rows):
        d = tv_distance(frow, grow)
        if d > best:
            best = d
    return best


# ---------------------------------------------------------------------------
# Denotation.

def _mask(n: int) -> int:
    return (1 << n) - 1


def _denote_gen(term: Gen) -> StochMap:
    if term.kind == COIN:
        return StochMap(0, 1, (bernoulli(term.p),))
    w = width(term.at)
    if term.kind == COPY:
        _check_width(2 * w, "a copy")
        return StochMap(w, 2 * w,
                        tuple(dirac((i << w) | i) for i in range(1 << w)))
    if term.kind == DISCARD:
        return StochMap(w, 0, tuple(dirac(0) for _ in range(1 << w)))
    if term.kind == PHI:
        n = 2 * w + 1
        _check_width(n, "a conditional")
        rows = []
        for i in range(1 << n):
            first = i >> (w + 1)
            bit = (i >> w) & 1
            last = i & _mask(w)
            rows.append(dirac(first if bit else last))
        return StochMap(n, w, tuple(rows))
    raise PBCError(f"unknown generator kind {term.kind!r}")


def denote(term: Term) -> StochMap:
    """Denote a star-free term as a stochastic map.

    Raises on parametric terms: instantiate them at a concrete size first.
    Every intermediate map is bounded by the wire limit (PBC_MAX_WIRES,
    default 20 wires).
    """
    judgement = typecheck(term)
    if not (is_star_free(judgement.domain) and is_star_free(judgement.codomain)):
        raise PBCError(
            f"term of parametric type {judgement} has no fixed-size "
            "semantics; instantiate it first")
    return _denote(term)


def _denote(term: Term) -> StochMap:
    if isinstance(term, Id):
        n = width(term.obj)
        _check_width(n, "an identity")
        return identity_map(n)
    if isinstance(term, Gen):
        return _denote_gen(term)
    if isinstance(term, Swap):
        wl = width(term.left)
        wr = width(term.right)
        _check_width(wl + wr, "a swap")
        rows = []
        for i in range(1 << (wl + wr)):
            left = i >> wr
            right = i & _mask(wr)
            rows.append(dirac((right << wl) | left))
        return StochMap(wl + wr, wl + wr, tuple(rows))
    if isinstance(term, Seq):
        return compose_maps(_denote(term.first), _denote(term.second))
    if isinstance(term, Par):
        return tensor_maps(_denote(term.left), _denote(term.right))
    if isinstance(term, TauStar):
        raise PBCError("parametric iteration reached the evaluator; "
                       "instantiate the term first")
    raise PBCError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Serialization.

def _bits(value: int, n: int) -> str:
    """Fixed-width bitstring; the empty word prints as a dash."""
    return format(value, f"0{n}b") if n else "-"


def map_to_tsv(f: StochMap) -> str:
    """Tab-separated rendering: header then one line per (input, output)
    pair with an exact num/den probability, sorted by input then output."""
    lines = ["in\tout\tprob"]
    for i, row in enumerate(f.rows):
        for o in sorted(row):
            p = row[o]
            lines.append(
                f"{_bits(i, f.in_arity)}\t{_bits(o, f.out_arity)}\t"
                f"{p.numerator}/{p.denominator}")
    return "\n".join(lines) + "\n"
