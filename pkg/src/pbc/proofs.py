"""Quantitative equality proofs with checkable distance bounds.

A ``Derivation`` is an explicit proof tree for a judgement ``f =[d] g``:
the two endpoint terms denote maps at total-variation distance at most
``d``.  ``check_derivation`` validates every node against its rule
schema and returns the root bound, so accepted derivations are sound by
construction.  ``synthesize_tight_derivation`` goes the other way and
produces, for any two star-free terms of one type, a derivation whose
root bound equals the exact hom distance.

The rules:

* ``Refl``: semantically equal terms, bound 0
* ``Top``: any two terms of one type, bound 1
* ``Sym``, ``Triangle``, ``Weaken``: symmetry, additivity, relaxation
* ``SeqLeft``/``SeqRight``/``ParLeft``/``ParRight``: congruence in one
  factor of a composition or tensor, the other factor shared
* ``PhiCase``: replace both branches of a conditional
  ``(c x id<B> x d) ; if`` under a shared bound
* ``PhiMix(p)``: replace both arms of a probabilistic choice
  ``(c x d) ; phi_p``, the bounds mixing as ``p*delta + (1-p)*gamma``

The synthesizer works on normal forms.  On input splits it recurses
into both branches and levels the bounds with ``Weaken`` before
``PhiCase``, which matches the exact distance (the distance of a case
split is the maximum over the branches).  On weighted trees it aligns
the two distributions along their shared mass: with overlap ``m`` both
sides rewrite as a ``phi_(1-m)`` mixture of a common part against the
disjoint remainders, and one ``PhiMix`` step yields ``1 - m``, which is
exactly the total-variation distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .objects import B, bools, is_star_free, object_normalize
from .terms import (
    COIN, PHI, Gen, Id, Par, PBCError, PBCTypeError, Seq, TauStar, Term,
    phi_p, typecheck,
)
from .semantics import StochMap
from .normalform import (
    Node, NormalForm, Tree, WeightedTree,
    decide_equal, nf_to_term, normalize, synthesize_from_map,
)

__all__ = [
    "Derivation", "PBCProofError",
    "REFL", "TOP", "SYM", "TRIANGLE", "WEAKEN",
    "SEQ_LEFT", "SEQ_RIGHT", "PAR_LEFT", "PAR_RIGHT",
    "PHI_CASE", "PHI_MIX",
    "check_derivation", "synthesize_tight_derivation",
    "serialize_derivation",
]

REFL = "Refl"
TOP = "Top"
SYM = "Sym"
TRIANGLE = "Triangle"
WEAKEN = "Weaken"
SEQ_LEFT = "SeqLeft"
SEQ_RIGHT = "SeqRight"
PAR_LEFT = "ParLeft"
PAR_RIGHT = "ParRight"
PHI_CASE = "PhiCase"
PHI_MIX = "PhiMix"

_RULES = (REFL, TOP, SYM, TRIANGLE, WEAKEN, SEQ_LEFT, SEQ_RIGHT,
          PAR_LEFT, PAR_RIGHT, PHI_CASE, PHI_MIX)


class PBCProofError(PBCError):
    """A derivation node does not match its rule schema."""


@dataclass(frozen=True, slots=True)
class Derivation:
    """One proof node: ``endpoints[0] =[bound] endpoints[1]``.

    ``param`` carries the choice weight of a ``PhiMix`` node and is
    None everywhere else.
    """

    rule: str
    endpoints: tuple  # tuple[Term, Term]
    bound: Fraction
    premises: tuple = ()  # tuple[Derivation, ...]
    param: Fraction | None = None

    def __post_init__(self):
        if self.rule not in _RULES:
            raise ValueError(f"unknown rule: {self.rule!r}")
        object.__setattr__(self, "endpoints", tuple(self.endpoints))
        object.__setattr__(self, "bound", Fraction(self.bound))
        object.__setattr__(self, "premises", tuple(self.premises))
        if self.param is not None:
            object.__setattr__(self, "param", Fraction(self.param))

    @property
    def lhs(self) -> Term:
        return self.endpoints[0]

    @property
    def rhs(self) -> Term:
        return self.endpoints[1]


def _scan_star_free(term: Term) -> None:
    if isinstance(term, TauStar):
        raise PBCProofError(
            "derivations cover star-free terms only; bounds at the star "
            "level live in the asymptotics module")
    if isinstance(term, Seq):
        _scan_star_free(term.first)
        _scan_star_free(term.second)
    elif isinstance(term, Par):
        _scan_star_free(term.left)
        _scan_star_free(term.right)


def _split_mix(term: Term):
    """Decompose ``(c x d) ; phi_p`` into (c, d, at, p), or None."""
    if not (isinstance(term, Seq) and isinstance(term.first, Par)):
        return None
    c, d = term.first.left, term.first.right
    probe = term.second
    if not (isinstance(probe, Seq) and isinstance(probe.second, Gen)
            and probe.second.kind == PHI):
        return None
    at = object_normalize(probe.second.at)
    inner = probe.first
    if not (isinstance(inner, Par) and isinstance(inner.left, Par)):
        return None
    wire_l, cn = inner.left.left, inner.left.right
    wire_r = inner.right
    if not (isinstance(wire_l, Id) and isinstance(wire_r, Id)
            and isinstance(cn, Gen) and cn.kind == COIN):
        return None
    if (object_normalize(wire_l.obj) != at
            or object_normalize(wire_r.obj) != at):
        return None
    return c, d, at, cn.p


def _split_case(term: Term):
    """Decompose ``(c x id<B> x d) ; if`` into (c, d, at), or None."""
    if not (isinstance(term, Seq) and isinstance(term.second, Gen)
            and term.second.kind == PHI):
        return None
    outer = term.first
    if not (isinstance(outer, Par) and isinstance(outer.left, Par)):
        return None
    c, mid, d = outer.left.left, outer.left.right, outer.right
    if not (isinstance(mid, Id) and object_normalize(mid.obj) == B):
        return None
    return c, d, object_normalize(term.second.at)


def _check(node: Derivation) -> Fraction:
    if not isinstance(node, Derivation):
        raise PBCProofError(f"not a derivation: {node!r}")
    lhs, rhs = node.endpoints
    jl = typecheck(lhs)
    jr = typecheck(rhs)
    if (jl.domain, jl.codomain) != (jr.domain, jr.codomain):
        raise PBCProofError(
            f"endpoint types differ: {jl} versus {jr}")
    if not (is_star_free(jl.domain) and is_star_free(jl.codomain)):
        raise PBCProofError(
            f"star-typed endpoints are out of scope: {jl}")
    _scan_star_free(lhs)
    _scan_star_free(rhs)
    if node.bound < 0:
        raise PBCProofError(f"negative bound {node.bound}")
    if node.rule != PHI_MIX and node.param is not None:
        raise PBCProofError(f"{node.rule} carries no parameter")

    sub = [_check(p) for p in node.premises]

    def arity(n: int) -> None:
        if len(node.premises) != n:
            raise PBCProofError(
                f"{node.rule} takes {n} premises, got {len(node.premises)}")

    if node.rule == REFL:
        arity(0)
        if node.bound != 0:
            raise PBCProofError(f"Refl has bound 0, got {node.bound}")
        if not decide_equal(lhs, rhs):
            raise PBCProofError(
                "Refl endpoints are not semantically equal")
        return node.bound

    if node.rule == TOP:
        arity(0)
        if node.bound != 1:
            raise PBCProofError(f"Top has bound 1, got {node.bound}")
        return node.bound

    if node.rule == SYM:
        arity(1)
        (p,) = node.premises
        if p.endpoints != (rhs, lhs):
            raise PBCProofError("Sym premise must flip the endpoints")
        if node.bound != sub[0]:
            raise PBCProofError("Sym keeps the premise bound")
        return node.bound

    if node.rule == TRIANGLE:
        arity(2)
        a, b = node.premises
        if a.lhs != lhs or a.rhs != b.lhs or b.rhs != rhs:
            raise PBCProofError(
                "Triangle premises must chain lhs -> middle -> rhs")
        if node.bound != sub[0] + sub[1]:
            raise PBCProofError(
                f"Triangle bound must be {sub[0] + sub[1]}, "
                f"got {node.bound}")
        return node.bound

    if node.rule == WEAKEN:
        arity(1)
        (p,) = node.premises
        if p.endpoints != node.endpoints:
            raise PBCProofError("Weaken keeps the endpoints")
        if node.bound < sub[0]:
            raise PBCProofError(
                f"Weaken cannot tighten: premise {sub[0]}, "
                f"bound {node.bound}")
        return node.bound

    if node.rule in (SEQ_LEFT, SEQ_RIGHT):
        arity(1)
        (p,) = node.premises
        if not (isinstance(lhs, Seq) and isinstance(rhs, Seq)):
            raise PBCProofError(f"{node.rule} endpoints must be compositions")
        if node.rule == SEQ_LEFT:
            varying = (lhs.first, rhs.first)
            shared = lhs.second == rhs.second
        else:
            varying = (lhs.second, rhs.second)
            shared = lhs.first == rhs.first
        if not shared:
            raise PBCProofError(f"{node.rule} must share the other factor")
        if p.endpoints != varying:
            raise PBCProofError(
                f"{node.rule} premise must relate the varying factor")
        if node.bound != sub[0]:
            raise PBCProofError(f"{node.rule} keeps the premise bound")
        return node.bound

    if node.rule in (PAR_LEFT, PAR_RIGHT):
        arity(1)
        (p,) = node.premises
        if not (isinstance(lhs, Par) and isinstance(rhs, Par)):
            raise PBCProofError(f"{node.rule} endpoints must be tensors")
        if node.rule == PAR_LEFT:
            varying = (lhs.left, rhs.left)
            shared = lhs.right == rhs.right
        else:
            varying = (lhs.right, rhs.right)
            shared = lhs.left == rhs.left
        if not shared:
            raise PBCProofError(f"{node.rule} must share the other factor")
        if p.endpoints != varying:
            raise PBCProofError(
                f"{node.rule} premise must relate the varying factor")
        if node.bound != sub[0]:
            raise PBCProofError(f"{node.rule} keeps the premise bound")
        return node.bound

    if node.rule == PHI_CASE:
        arity(2)
        sl = _split_case(lhs)
        sr = _split_case(rhs)
        if sl is None or sr is None:
            raise PBCProofError(
                "PhiCase endpoints must look like (c x id<B> x d) ; if")
        if sl[2] != sr[2]:
            raise PBCProofError("PhiCase conditionals sit at different words")
        p1, p0 = node.premises
        if p1.endpoints != (sl[0], sr[0]) or p0.endpoints != (sl[1], sr[1]):
            raise PBCProofError(
                "PhiCase premises must relate the two branches in order")
        if not (sub[0] == sub[1] == node.bound):
            raise PBCProofError(
                "PhiCase shares one bound between both premises")
        return node.bound

    if node.rule == PHI_MIX:
        arity(2)
        ml = _split_mix(lhs)
        mr = _split_mix(rhs)
        if ml is None or mr is None:
            raise PBCProofError(
                "PhiMix endpoints must look like (c x d) ; phi_p")
        if ml[2] != mr[2] or ml[3] != mr[3]:
            raise PBCProofError("PhiMix sides must share the word and bias")
        p = ml[3]
        if node.param != p:
            raise PBCProofError(
                f"PhiMix parameter {node.param} does not match the "
                f"bias {p} in the endpoints")
        p1, p2 = node.premises
        if p1.endpoints != (ml[0], mr[0]) or p2.endpoints != (ml[1], mr[1]):
            raise PBCProofError(
                "PhiMix premises must relate the two arms in order")
        want = p * sub[0] + (1 - p) * sub[1]
        if node.bound != want:
            raise PBCProofError(
                f"PhiMix bound must be {want}, got {node.bound}")
        return node.bound

    raise PBCProofError(f"unknown rule: {node.rule!r}")


def check_derivation(d: Derivation) -> Fraction:
    """Validate every node of a derivation and return the root bound.

    Raises PBCProofError on any malformed rule application, bound
    mismatch, or endpoint type mismatch.  An accepted derivation
    guarantees that the endpoint denotations are within the root bound
    in hom distance.
    """
    return _check(d)


# ---------------------------------------------------------------------------
# The tight synthesizer.

def _refl(a: Term, b: Term) -> Derivation:
    return Derivation(REFL, (a, b), Fraction(0))


def _dist_of_tree(tree: WeightedTree) -> dict:
    out: dict = {}
    scale = Fraction(1)
    while isinstance(tree, Node):
        out[tree.head] = scale * tree.p
        scale *= 1 - tree.p
        tree = tree.rest
    out[tree.value] = out.get(tree.value, Fraction(0)) + scale
    return out


def _dist_term(dist: dict, out_arity: int) -> Term:
    nf = synthesize_from_map(StochMap(0, out_arity, (dist,)))
    return nf_to_term(nf)


def _synth_trees(F: Tree, G: Tree) -> Derivation:
    tf = nf_to_term(F)
    tg = nf_to_term(G)
    v = _dist_of_tree(F.tree)
    w = _dist_of_tree(G.tree)
    shared = {x: min(q, w[x]) for x, q in v.items() if x in w}
    m = sum(shared.values(), Fraction(0))
    if m == 0:
        return Derivation(TOP, (tf, tg), Fraction(1))
    # 0 < m < 1: align the common mass and mix it against the disjoint
    # remainders; the choice weight 1 - m is the exact distance.
    common = {x: q / m for x, q in shared.items()}
    v_rest = {x: (q - shared.get(x, 0)) / (1 - m)
              for x, q in v.items() if q > shared.get(x, 0)}
    w_rest = {x: (q - shared.get(x, 0)) / (1 - m)
              for x, q in w.items() if q > shared.get(x, 0)}
    tc = _dist_term(common, F.out_arity)
    tvr = _dist_term(v_rest, F.out_arity)
    twr = _dist_term(w_rest, F.out_arity)
    choice = phi_p(bools(F.out_arity), 1 - m)
    mix_f = Seq(Par(tvr, tc), choice)
    mix_g = Seq(Par(twr, tc), choice)
    mix = Derivation(
        PHI_MIX, (mix_f, mix_g), 1 - m,
        (Derivation(TOP, (tvr, twr), Fraction(1)), _refl(tc, tc)),
        param=1 - m)
    inner = Derivation(TRIANGLE, (mix_f, tg), mix.bound,
                       (mix, _refl(mix_g, tg)))
    return Derivation(TRIANGLE, (tf, tg), inner.bound,
                      (_refl(tf, mix_f), inner))


def _synth_nf(F: NormalForm, G: NormalForm) -> Derivation:
    if F == G:
        return _refl(nf_to_term(F), nf_to_term(G))
    if isinstance(F, Tree):
        return _synth_trees(F, G)
    d1 = _synth_nf(F.on_last_1, G.on_last_1)
    d0 = _synth_nf(F.on_last_0, G.on_last_0)
    delta = max(d1.bound, d0.bound)
    if d1.bound < delta:
        d1 = Derivation(WEAKEN, d1.endpoints, delta, (d1,))
    if d0.bound < delta:
        d0 = Derivation(WEAKEN, d0.endpoints, delta, (d0,))
    tf = nf_to_term(F)
    tg = nf_to_term(G)
    case = Derivation(PHI_CASE, (tf.second, tg.second), delta, (d1, d0))
    return Derivation(SEQ_RIGHT, (tf, tg), delta, (case,))


def synthesize_tight_derivation(f: Term, g: Term) -> Derivation:
    """A checkable derivation whose bound is the exact hom distance.

    Both terms must be star-free and of one type.  The construction
    runs over the normal forms and glues back to the given terms with
    zero-cost Refl bridges, so the root endpoints are ``f`` and ``g``
    themselves.
    """
    jf = typecheck(f)
    jg = typecheck(g)
    if (jf.domain, jf.codomain) != (jg.domain, jg.codomain):
        raise PBCTypeError(f"cannot relate terms of types {jf} and {jg}")
    if not (is_star_free(jf.domain) and is_star_free(jf.codomain)):
        raise PBCTypeError(
            f"tight derivations cover star-free terms only, got {jf}")
    _scan_star_free(f)
    _scan_star_free(g)
    if decide_equal(f, g):
        return _refl(f, g)
    core = _synth_nf(normalize(f), normalize(g))
    inner = Derivation(TRIANGLE, (core.lhs, g), core.bound,
                       (core, _refl(core.rhs, g)))
    return Derivation(TRIANGLE, (f, g), inner.bound,
                      (_refl(f, core.lhs), inner))


# ---------------------------------------------------------------------------
# Plain-text rendering: one rule per line, children indented.

def _rule_label(node: Derivation) -> str:
    if node.rule == PHI_MIX:
        p = node.param
        return f"PhiMix({p.numerator}/{p.denominator})"
    return node.rule


def serialize_derivation(d: Derivation) -> str:
    """Indented trace of a derivation, bounds as exact fractions."""
    lines: list = []

    def walk(node: Derivation, depth: int) -> None:
        b = node.bound
        lines.append(
            "  " * depth
            + f"{_rule_label(node)} {b.numerator}/{b.denominator}")
        for p in node.premises:
            walk(p, depth + 1)

    walk(d, 0)
    return "\n".join(lines)
