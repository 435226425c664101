"""Term syntax, typechecking and pretty printing.

Terms denote morphisms between objects.  The grammar is deliberately small:

* ``Id(obj)`` -- identity wiring
* ``Gen(kind, at, p)`` -- a generator: copy, discard, a biased coin, or the
  conditional ``phi`` that selects its first or last argument block
  depending on a Boolean in the middle
* ``Swap(left, right)`` -- the block symmetry
* ``Seq(first, second)`` / ``Par(left, right)`` -- composition and tensor
* ``TauStar(state, inputs, outputs, body)`` -- parametric iteration of a
  one-step body over star tuples, threading a state object

Copy, discard and phi are primitive at star-free words only; at objects
containing stars they are derived circuits built from iteration (see
``copy_at`` and friends in :mod:`pbc.combinators`).  The typechecker
enforces this, which keeps pretty printing and parsing mutually inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .objects import (
    B, UNIT, Object, bools, is_star_free, obj_to_str, object_normalize,
    star, tensor,
)

__all__ = [
    "Term", "Id", "Gen", "Swap", "Seq", "Par", "TauStar", "TypeJudgement",
    "PBCError", "PBCTypeError",
    "COPY", "DISCARD", "COIN", "PHI",
    "copy_gen", "discard_gen", "coin", "phi_gen", "phi_p",
    "seq", "par", "typecheck", "pretty_term", "permute_blocks",
]

COPY = "copy"
DISCARD = "discard"
COIN = "coin"
PHI = "phi"

_GEN_KINDS = (COPY, DISCARD, COIN, PHI)


class PBCError(Exception):
    """Base error for this package."""


class PBCTypeError(PBCError):
    """A term does not typecheck."""


@dataclass(frozen=True, slots=True)
class Id:
    obj: Object


@dataclass(frozen=True, slots=True)
class Gen:
    kind: str
    at: Object = UNIT
    p: Fraction | None = None

    def __post_init__(self):
        if self.kind not in _GEN_KINDS:
            raise ValueError(f"unknown generator kind: {self.kind!r}")
        if (self.kind == COIN) != (self.p is not None):
            raise ValueError("coin takes a bias, other generators do not")


@dataclass(frozen=True, slots=True)
class Swap:
    left: Object
    right: Object


@dataclass(frozen=True, slots=True)
class Seq:
    first: "Term"
    second: "Term"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class TauStar:
    state: Object
    inputs: tuple  # tuple[Object, ...]
    outputs: tuple  # tuple[Object, ...]
    body: "Term"


Term = Id | Gen | Swap | Seq | Par | TauStar


@dataclass(frozen=True, slots=True)
class TypeJudgement:
    domain: Object
    codomain: Object

    def __str__(self):
        return f"{obj_to_str(self.domain)} -> {obj_to_str(self.codomain)}"


def copy_gen(obj: Object) -> Gen:
    return Gen(COPY, object_normalize(obj))


def discard_gen(obj: Object) -> Gen:
    return Gen(DISCARD, object_normalize(obj))


def coin(p) -> Gen:
    return Gen(COIN, UNIT, Fraction(p))


def phi_gen(obj: Object) -> Gen:
    """The conditional at an object: picks the first block when the middle
    Boolean is 1, the last block when it is 0."""
    return Gen(PHI, object_normalize(obj))


def phi_p(obj: Object, p) -> Term:
    """Probabilistic choice: a coin of bias p plugged into the conditional."""
    obj = object_normalize(obj)
    return Seq(par(Id(obj), coin(p), Id(obj)), phi_gen(obj))


def seq(*terms: Term) -> Term:
    """Left-nested sequential composition."""
    if not terms:
        raise ValueError("seq of no terms")
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms: Term) -> Term:
    """Left-nested tensor."""
    if not terms:
        return Id(UNIT)
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def _dot1(objs: tuple) -> Object:
    return tensor(*objs)


def _dotstar(objs: tuple) -> Object:
    return tensor(*(star(o) for o in objs))


def typecheck(term: Term) -> TypeJudgement:
    """Compute the type of a term, raising PBCTypeError on mismatch."""
    if isinstance(term, Id):
        o = object_normalize(term.obj)
        return TypeJudgement(o, o)
    if isinstance(term, Gen):
        at = object_normalize(term.at)
        if term.kind != COIN and not is_star_free(at):
            raise PBCTypeError(
                f"{term.kind} is primitive at star-free words only, not at "
                f"{obj_to_str(at)}; use the derived star-lifted circuit")
        if term.kind == COPY:
            return TypeJudgement(at, tensor(at, at))
        if term.kind == DISCARD:
            return TypeJudgement(at, UNIT)
        if term.kind == COIN:
            if not 0 <= term.p <= 1:
                raise PBCTypeError(f"coin bias {term.p} outside [0, 1]")
            return TypeJudgement(UNIT, B)
        if term.kind == PHI:
            return TypeJudgement(tensor(at, B, at), at)
    if isinstance(term, Swap):
        l = object_normalize(term.left)
        r = object_normalize(term.right)
        return TypeJudgement(tensor(l, r), tensor(r, l))
    if isinstance(term, Seq):
        first = typecheck(term.first)
        second = typecheck(term.second)
        if first.codomain != second.domain:
            raise PBCTypeError(
                "sequential mismatch: expected "
                f"{obj_to_str(first.codomain)} on the left of the second "
                f"factor, got {obj_to_str(second.domain)}")
        return TypeJudgement(first.domain, second.codomain)
    if isinstance(term, Par):
        left = typecheck(term.left)
        right = typecheck(term.right)
        return TypeJudgement(tensor(left.domain, right.domain),
                             tensor(left.codomain, right.codomain))
    if isinstance(term, TauStar):
        state = object_normalize(term.state)
        ins = tuple(object_normalize(o) for o in term.inputs)
        outs = tuple(object_normalize(o) for o in term.outputs)
        body = typecheck(term.body)
        want_dom = tensor(state, _dot1(ins))
        want_cod = tensor(_dot1(outs), state)
        if body.domain != want_dom or body.codomain != want_cod:
            raise PBCTypeError(
                "iteration body must be "
                f"{obj_to_str(want_dom)} -> {obj_to_str(want_cod)}, got "
                f"{obj_to_str(body.domain)} -> {obj_to_str(body.codomain)}")
        return TypeJudgement(tensor(state, _dotstar(ins)),
                             tensor(_dotstar(outs), state))
    raise PBCTypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Pretty printing.  Parentheses are kept exactly where reparsing needs them
# to rebuild the same tree: ; and x both parse left-associated, x binds
# tighter than ;.

def _rat_str(p: Fraction) -> str:
    return str(p)


def _pretty(term: Term, level: int) -> str:
    # level 0: may print a bare Seq; level 1: may print a bare Par;
    # level 2: primaries only.
    if isinstance(term, Seq):
        s = f"{_pretty(term.first, 0)} ; {_pretty(term.second, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(term, Par):
        s = f"{_pretty(term.left, 1)} x {_pretty(term.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(term, Id):
        return f"id<{obj_to_str(term.obj)}>"
    if isinstance(term, Swap):
        return f"swap<{obj_to_str(term.left)},{obj_to_str(term.right)}>"
    if isinstance(term, Gen):
        if term.kind == COIN:
            return f"coin({_rat_str(term.p)})"
        name = {COPY: "copy", DISCARD: "del", PHI: "if"}[term.kind]
        return f"{name}<{obj_to_str(term.at)}>"
    if isinstance(term, TauStar):
        ins = ", ".join(obj_to_str(o) for o in term.inputs)
        outs = ", ".join(obj_to_str(o) for o in term.outputs)
        return (f"iter[{obj_to_str(term.state)}; ({ins}); ({outs})]"
                f"({_pretty(term.body, 0)})")
    raise TypeError(f"not a term: {term!r}")


def pretty_term(term: Term) -> str:
    """Render a term in the surface syntax; parsing the result rebuilds
    exactly the same tree."""
    return _pretty(term, 0)


# ---------------------------------------------------------------------------
# Block permutations as explicit wiring terms.

def permute_blocks(blocks: list, order: list) -> Term:
    """Wiring that reorders labelled blocks of wires.

    ``blocks`` is the list of objects as they appear in the domain;
    ``order`` lists source indices in target order, so the codomain is
    ``blocks[order[0]] @ blocks[order[1]] @ ...``.  The permutation is
    realized as a chain of adjacent block swaps, which keeps every
    intermediate object explicit.
    """
    blocks = [object_normalize(b) for b in blocks]
    if sorted(order) != list(range(len(blocks))):
        raise ValueError(f"not a permutation of {len(blocks)} blocks: {order}")
    # Drop empty blocks: they carry no wires.  Positions are tracked by
    # the original indices.
    live = [i for i in order if blocks[i] != UNIT]
    current = [i for i in range(len(blocks)) if blocks[i] != UNIT]
    full = tensor(*(blocks[i] for i in current))
    layers = []
    for target_pos, src in enumerate(live):
        pos = current.index(src)
        while pos > target_pos:
            left_word = tensor(*(blocks[i] for i in current[:pos - 1]))
            a = blocks[current[pos - 1]]
            b = blocks[current[pos]]
            right_word = tensor(*(blocks[i] for i in current[pos + 1:]))
            layer: Term = Swap(a, b)
            if left_word != UNIT:
                layer = Par(Id(left_word), layer)
            if right_word != UNIT:
                layer = Par(layer, Id(right_word))
            layers.append(layer)
            current[pos - 1], current[pos] = current[pos], current[pos - 1]
            pos -= 1
    if not layers:
        return Id(full)
    return seq(*layers)
