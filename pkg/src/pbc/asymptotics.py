"""Exact distance series over the iteration size, and decay reports.

Two parametric circuits are compared by instantiating both at each size
k in a range and measuring the exact hom distance of the results.  A
``DecaySeries`` is the raw list of (k, d_k); ``negligibility_report``
scales it by k^a, classifies the trend, and looks for a threshold
witness.  Everything is computed in rationals; the one floating-point
number, ``fitted_rate``, is an explicitly approximate least-squares
slope offered for orientation only.

A report is bounded evidence.  The tool never claims the limit: it
states that the sampled, exactly computed values are consistent with
the scaled distance going to zero, or that they visibly are not.

``newton_bound_check`` verifies the transport of a one-step bound to
the k-fold iteration: if the one-step square commutes up to ``a``, the
iterated sides stay within ``k * a`` at every size.  ``lemma_demo``
rebuilds the stock examples (one-time pad, the all-ones detector, key
guessing, the von Neumann coin) and asserts their closed-form decay
laws on top of the numeric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import linear_regression

from .objects import Object, obj_to_str, object_normalize, star, tensor
from .terms import (
    Id, PBCError, PBCTypeError, TauStar, Term, par, pretty_term, seq,
    typecheck,
)
from .semantics import denote, hom_distance
from .iteration import TupleSpec, instantiate
from . import combinators as C

__all__ = [
    "DecaySeries", "DecayReport", "EqualityReport", "NewtonReport",
    "CONSISTENT", "NOT_DECREASING", "INCONCLUSIVE",
    "distance_series", "negligibility_report", "newton_bound_check",
    "lemma_demo", "report_to_csv",
]

CONSISTENT = "ConsistentWithNegligible"
NOT_DECREASING = "NotDecreasing"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, slots=True)
class DecaySeries:
    """Exact distances d_k = d(S_k(f), S_k(g)) over increasing sizes k."""

    pairs: tuple  # ((k, Fraction), ...)
    f_label: str
    g_label: str

    def __post_init__(self):
        pairs = tuple((int(k), Fraction(d)) for k, d in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        ks = [k for k, _ in pairs]
        if ks != sorted(set(ks)):
            raise PBCError("series sizes must be strictly increasing")
        for k, d in pairs:
            if not 0 <= d <= 1:
                raise PBCError(f"distance {d} at k={k} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class DecayReport:
    """A series scaled by k^a with a trend verdict.

    ``threshold_witness`` is (epsilon, N): from size N on, every sampled
    scaled value is below epsilon; when no sampled value gets that low
    but the tail does decay, N marks the onset of strict decrease
    instead (bounded evidence either way).  ``fitted_rate`` is the
    least-squares slope of ln d_k over k, an approximate float, absent
    when fewer than three positive distances exist.
    """

    series: DecaySeries
    exponent_a: int
    scaled: tuple  # ((k, Fraction), ...)
    fitted_rate: float | None
    verdict: str
    threshold_witness: tuple | None  # (Fraction, int)


@dataclass(frozen=True, slots=True)
class EqualityReport:
    """Outcome of a demo whose claim is exact equality at every size."""

    series: DecaySeries
    exact: bool


@dataclass(frozen=True, slots=True)
class NewtonReport:
    """Per-size conclusion distances against the k-scaled premise gap."""

    premise_distance: Fraction
    rows: tuple  # ((k, c_k, k * premise), ...)


def distance_series(f: Term, g: Term, k_min: int, k_max: int,
                    f_label: str | None = None,
                    g_label: str | None = None) -> DecaySeries:
    """Exact hom distances of the two instantiated terms for each k."""
    jf = typecheck(f)
    jg = typecheck(g)
    if (jf.domain, jf.codomain) != (jg.domain, jg.codomain):
        raise PBCTypeError(f"cannot compare terms of types {jf} and {jg}")
    if not 0 <= k_min <= k_max:
        raise PBCError(f"bad size range {k_min}..{k_max}")
    pairs = []
    for k in range(k_min, k_max + 1):
        d = hom_distance(denote(instantiate(k, f)),
                         denote(instantiate(k, g)))
        pairs.append((k, d))
    return DecaySeries(tuple(pairs),
                       f_label if f_label is not None else pretty_term(f),
                       g_label if g_label is not None else pretty_term(g))


def _fit_rate(pairs) -> float | None:
    positive = [(k, d) for k, d in pairs if d > 0]
    if len(positive) < 3:
        return None
    xs = [float(k) for k, _ in positive]
    ys = [math.log(float(d)) for _, d in positive]
    return linear_regression(xs, ys).slope


def negligibility_report(series: DecaySeries, a: int,
                         epsilon) -> DecayReport:
    """Scale a series by k^a and classify the trend.

    The verdict looks at the tail (the last half of the scaled
    entries): strictly decreasing with a strict overall drop reads as
    consistent with the scaled distance vanishing, a non-decreasing
    tail as the opposite, anything else as inconclusive.  An all-zero
    series is consistent outright.  A single sample supports no trend
    at all unless it is zero.
    """
    if a < 0:
        raise PBCError(f"scaling exponent must be >= 0, got {a}")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PBCError(f"threshold must be positive, got {epsilon}")
    if not series.pairs:
        raise PBCError("empty series")
    scaled = tuple((k, Fraction(k) ** a * d) for k, d in series.pairs)
    values = [v for _, v in scaled]

    all_zero = all(d == 0 for _, d in series.pairs)
    tail = values[-((len(values) + 1) // 2):]
    if all_zero:
        verdict = CONSISTENT
    elif len(values) == 1:
        verdict = INCONCLUSIVE
    elif (all(x > y for x, y in zip(tail, tail[1:]))
            and tail[-1] < tail[0]):
        verdict = CONSISTENT
    elif all(x <= y for x, y in zip(tail, tail[1:])):
        verdict = NOT_DECREASING
    else:
        verdict = INCONCLUSIVE

    witness = None
    if verdict == CONSISTENT:
        # Longest suffix below the threshold at every sampled size.
        i = len(scaled)
        while i > 0 and scaled[i - 1][1] < epsilon:
            i -= 1
        if i < len(scaled):
            witness = (epsilon, scaled[i][0])
        else:
            # Nothing sampled gets under epsilon; witness the onset of
            # strict decrease instead.
            j = len(scaled) - 1
            while j > 0 and scaled[j - 1][1] > scaled[j][1]:
                j -= 1
            witness = (epsilon, scaled[j][0])

    return DecayReport(series, a, scaled, _fit_rate(series.pairs),
                       verdict, witness)


def newton_bound_check(f: Term, g: Term, h: Term, spec: TupleSpec,
                       k_max: int) -> NewtonReport:
    """Check the iterated sides against k times the one-step gap.

    ``f`` maps the state of ``h`` to the state of ``g``; both loop
    bodies share the stream signature in ``spec`` (stated for ``h``).
    The premise gap is the distance between ``(f x id);g`` and
    ``h;(id x f)``; the conclusion compares ``(f x id);iter(g)``
    against ``iter(h);(id x f)`` at each size.  A size where the
    conclusion exceeds k times the premise would refute the transport
    bound, so it raises instead of reporting.
    """
    state = object_normalize(spec.state)
    in_one = tensor(*(object_normalize(o) for o in spec.inputs))
    out_one = tensor(*(object_normalize(o) for o in spec.outputs))
    jf = typecheck(f)
    if jf.domain != state:
        raise PBCTypeError(
            f"the state map must start at {obj_to_str(state)}, "
            f"got {jf}")
    mid = jf.codomain
    jg = typecheck(g)
    if (jg.domain, jg.codomain) != (tensor(mid, in_one),
                                    tensor(out_one, mid)):
        raise PBCTypeError(f"loop body g has type {jg}, unfit for the "
                           f"stream signature and state {obj_to_str(mid)}")
    jh = typecheck(h)
    if (jh.domain, jh.codomain) != (tensor(state, in_one),
                                    tensor(out_one, state)):
        raise PBCTypeError(f"loop body h has type {jh}, unfit for the "
                           f"stream signature and state {obj_to_str(state)}")

    premise_lhs = seq(par(f, Id(in_one)), g)
    premise_rhs = seq(h, par(Id(out_one), f))
    gap = hom_distance(denote(premise_lhs), denote(premise_rhs))

    in_streams = tensor(*(star(o) for o in spec.inputs))
    out_streams = tensor(*(star(o) for o in spec.outputs))
    lhs = seq(par(f, Id(in_streams)),
              TauStar(mid, spec.inputs, spec.outputs, g))
    rhs = seq(TauStar(state, spec.inputs, spec.outputs, h),
              par(Id(out_streams), f))

    rows = []
    for k in range(0, k_max + 1):
        c = hom_distance(denote(instantiate(k, lhs)),
                         denote(instantiate(k, rhs)))
        ceiling = k * gap
        if c > ceiling:
            raise PBCError(
                f"iterated gap {c} at k={k} exceeds {k} x {gap}; "
                "the transport bound is violated")
        rows.append((k, c, ceiling))
    return NewtonReport(gap, tuple(rows))


# ---------------------------------------------------------------------------
# Stock demonstrations with their closed-form laws.

_DEMO_CAP = 8  # merged-iteration widths keep exact evaluation quick


def _powers(base: Fraction, k_max: int):
    # base^k with 0^0 = 1
    out = [Fraction(1)]
    for _ in range(k_max):
        out.append(out[-1] * base)
    return out


def lemma_demo(name: str, k_max: int = 10, p=None):
    """Rebuild a named example pair and verify its decay law.

    Names: ``otp`` (exact equality at every size), ``all1`` (bound
    p^k), ``keyguess`` (bound (1/2)^k, sizes capped at 8), and
    ``vonneumann`` (exact law |2p-1|^k from size 1 on).  ``p`` applies
    to ``all1`` (default 1/2) and ``vonneumann`` (default 3/4).

    The returned report leaves the series unscaled (exponent 0); rerun
    ``negligibility_report`` on its series for other exponents.
    """
    if k_max < 0:
        raise PBCError(f"negative size bound {k_max}")
    if name in ("otp", "keyguess") and p is not None:
        raise PBCError(f"demo {name} takes no bias parameter")
    if p is not None:
        p = Fraction(p)
        if not 0 < p < 1:
            raise PBCError(f"bias must be strictly between 0 and 1, got {p}")

    if name == "otp":
        if denote(C.otp_lhs()) != denote(C.otp_rhs()):
            raise PBCError("one-time pad sides differ at the one-bit level")
        hi = min(k_max, _DEMO_CAP)
        series = distance_series(C.otp_star_lhs(), C.otp_star_rhs(),
                                 0, hi, "otp_lhs", "otp_rhs")
        if any(d != 0 for _, d in series.pairs):
            raise PBCError("one-time pad drifted under iteration")
        return EqualityReport(series, True)

    if name == "all1":
        p = p if p is not None else Fraction(1, 2)
        series = distance_series(C.all_1(p), C.all_1_rhs(p), 0, k_max,
                                 f"all1({p})", f"all1_rhs({p})")
        bounds = _powers(p, k_max)
        for k, d in series.pairs:
            if d > bounds[k]:
                raise PBCError(f"all-ones distance {d} at k={k} "
                               f"exceeds {bounds[k]}")
        return negligibility_report(series, 0, Fraction(1, 100))

    if name == "keyguess":
        hi = min(k_max, _DEMO_CAP)
        series = distance_series(C.keyguess_lhs(), C.keyguess_rhs(),
                                 0, hi, "keyguess_lhs", "keyguess_rhs")
        bounds = _powers(Fraction(1, 2), hi)
        for k, d in series.pairs:
            if d > bounds[k]:
                raise PBCError(f"key-guess distance {d} at k={k} "
                               f"exceeds {bounds[k]}")
        return negligibility_report(series, 0, Fraction(1, 100))

    if name == "vonneumann":
        p = p if p is not None else Fraction(3, 4)
        series = distance_series(C.vn_lhs(p), C.vn_rhs(), 0, k_max,
                                 f"vonneumann({p})", "vonneumann_rhs")
        law = _powers(abs(2 * p - 1), k_max)
        for k, d in series.pairs:
            if k >= 1 and d != law[k]:
                raise PBCError(f"von Neumann distance {d} at k={k} "
                               f"differs from {law[k]}")
        return negligibility_report(series, 0, Fraction(1, 100))

    raise PBCError(f"unknown demo: {name!r}")


def report_to_csv(report: DecayReport) -> str:
    """CSV rows plus verdict footer, all values exact."""
    lines = ["k,d_num,d_den,scaled_num,scaled_den"]
    for (k, d), (_, s) in zip(report.series.pairs, report.scaled):
        lines.append(f"{k},{d.numerator},{d.denominator},"
                     f"{s.numerator},{s.denominator}")
    lines.append(f"verdict={report.verdict}")
    if report.threshold_witness is None:
        lines.append("witness_N=none")
    else:
        lines.append(f"witness_N={report.threshold_witness[1]}")
    if report.fitted_rate is None:
        lines.append("fitted_rate=none")
    else:
        lines.append(f"fitted_rate={report.fitted_rate!r}")
    return "\n".join(lines) + "\n"
