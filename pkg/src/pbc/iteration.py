"""Instantiating parametric iteration at concrete sizes.

A term built with ``TauStar`` loops a body over streams: the body consumes
the loop state plus one element of each input stream and emits one element
of each output stream plus the next state.  At a concrete size k the loop
unrolls into an ordinary circuit; ``instantiate`` performs that unrolling
everywhere in a term, replacing each starred object by a k-fold power.

The unrolling at k+1 peels one element off every input stream, runs the
body once, recurses, then files the fresh output elements back into their
streams.  Streams of several objects are stored block-wise (all elements
of the first stream, then all of the second, and so on), so peeling and
filing are wiring permutations; ``push_term`` and ``pop_term`` build them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .objects import UNIT, BoolAtom, Object, Star, obj_to_str, power, tensor
from .terms import (
    Gen, Id, Par, PBCError, PBCTypeError, Seq, Swap, TauStar, Term, par,
    permute_blocks, seq, typecheck,
)
from .semantics import denote

__all__ = [
    "TupleSpec", "dot_power", "push_term", "pop_term", "tau_k_expand",
    "instantiate_object", "instantiate", "star_equiv_bounded",
    "EqualUpTo", "Counterexample", "K_TEST",
]

K_TEST = 6


@dataclass(frozen=True, slots=True)
class TupleSpec:
    """State object plus input and output stream signatures of a loop."""

    state: Object
    inputs: tuple
    outputs: tuple

    def in_word(self, k: int) -> Object:
        return dot_power(self.inputs, k)

    def out_word(self, k: int) -> Object:
        return dot_power(self.outputs, k)


def dot_power(blocks, k: int) -> Object:
    """Block-wise power: each listed object repeated k times in place."""
    if k < 0:
        raise ValueError(f"negative power {k}")
    return tensor(*(power(b, k) for b in blocks))


def _interleave_order(n: int):
    # [A1..An, A1^k..An^k] read off as [A1, A1^k, A2, A2^k, ...]
    order = []
    for i in range(n):
        order.append(i)
        order.append(n + i)
    return order


def push_term(blocks, k: int) -> Term:
    """Wiring of type ``blocks . 1 (x) blocks . k -> blocks . (k+1)``.

    Files one fresh element per stream into the front of its block.
    """
    blocks = tuple(blocks)
    n = len(blocks)
    source = list(blocks) + [power(b, k) for b in blocks]
    return permute_blocks(source, _interleave_order(n))


def pop_term(blocks, k: int) -> Term:
    """Wiring of type ``blocks . (k+1) -> blocks . 1 (x) blocks . k``.

    Peels the front element off every stream; inverse of ``push_term``.
    """
    blocks = tuple(blocks)
    n = len(blocks)
    source = []
    for b in blocks:
        source.append(b)
        source.append(power(b, k))
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return permute_blocks(source, order)


def tau_k_expand(k: int, spec: TupleSpec, body: Term) -> Term:
    """Unroll a loop body k times into a star-free term.

    ``body`` must already be star-free of type
    ``state (x) inputs.1 -> outputs.1 (x) state``; the result has type
    ``state (x) inputs.k -> outputs.k (x) state``.
    """
    if k < 0:
        raise ValueError(f"cannot unroll {k} times")
    expected_dom = tensor(spec.state, spec.in_word(1))
    expected_cod = tensor(spec.out_word(1), spec.state)
    judgement = typecheck(body)
    if (judgement.domain, judgement.codomain) != (expected_dom, expected_cod):
        raise PBCTypeError(
            f"loop body has type {judgement}, spec wants "
            f"{obj_to_str(expected_dom)} -> {obj_to_str(expected_cod)}")
    result: Term = Id(spec.state)
    for j in range(k):
        # grow from tau^j to tau^(j+1)
        stage = seq(
            par(Id(spec.state), pop_term(spec.inputs, j)),
            par(body, Id(spec.in_word(j))),
            par(Id(spec.out_word(1)), result),
            par(push_term(spec.outputs, j), Id(spec.state)),
        )
        result = stage
    return result


def instantiate_object(k: int, obj: Object) -> Object:
    """Replace every starred atom by k copies of its instantiated inner."""
    out = []
    for atom in obj:
        if isinstance(atom, BoolAtom):
            out.append((atom,))
        elif isinstance(atom, Star):
            out.append(instantiate_object(k, atom.inner) * k)
        else:
            raise PBCError(f"not an atom: {atom!r}")
    return tensor(*out)


def instantiate(k: int, term: Term) -> Term:
    """Unroll every loop in ``term`` at size k.

    The result is star-free whenever the original typechecks, and equals
    the original term when that is already star-free.
    """
    if k < 0:
        raise ValueError(f"negative instantiation size {k}")
    if isinstance(term, Id):
        return Id(instantiate_object(k, term.obj))
    if isinstance(term, Gen):
        if term.at == UNIT or all(isinstance(a, BoolAtom) for a in term.at):
            return term
        return Gen(term.kind, instantiate_object(k, term.at), term.p)
    if isinstance(term, Swap):
        return Swap(instantiate_object(k, term.left),
                    instantiate_object(k, term.right))
    if isinstance(term, Seq):
        return Seq(instantiate(k, term.first), instantiate(k, term.second))
    if isinstance(term, Par):
        return Par(instantiate(k, term.left), instantiate(k, term.right))
    if isinstance(term, TauStar):
        spec = TupleSpec(
            instantiate_object(k, term.state),
            tuple(instantiate_object(k, b) for b in term.inputs),
            tuple(instantiate_object(k, b) for b in term.outputs))
        return tau_k_expand(k, spec, instantiate(k, term.body))
    raise PBCError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Bounded equivalence of parametric terms.

@dataclass(frozen=True, slots=True)
class EqualUpTo:
    """Both terms denote the same map at every size up to ``k_max``."""

    k_max: int

    def __bool__(self):
        return True


@dataclass(frozen=True, slots=True)
class Counterexample:
    """First size and input where the two denotations part ways."""

    k: int
    input_value: int
    in_arity: int
    lhs_row: dict
    rhs_row: dict

    def __bool__(self):
        return False


def star_equiv_bounded(s: Term, t: Term, k_max: int = K_TEST):
    """Compare two parametric terms at every size 0..k_max.

    Returns ``EqualUpTo(k_max)`` when all instantiations denote equal
    maps, else a ``Counterexample`` for the first disagreement.  Both
    terms must share a type before instantiation.
    """
    sj = typecheck(s)
    tj = typecheck(t)
    if (sj.domain, sj.codomain) != (tj.domain, tj.codomain):
        raise PBCTypeError(
            f"cannot compare terms of types {sj} and {tj}")
    for k in range(k_max + 1):
        fs = denote(instantiate(k, s))
        ft = denote(instantiate(k, t))
        if fs.rows == ft.rows:
            continue
        for i, (a, b) in enumerate(zip(fs.rows, ft.rows)):
            if a != b:
                return Counterexample(k, i, fs.in_arity, dict(a), dict(b))
    return EqualUpTo(k_max)
