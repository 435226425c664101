import random
from fractions import Fraction

import pytest
from pbc import (
    B,
    Derivation,
    Id,
    PBCProofError,
    Par,
    Seq,
    StochMap,
    bools,
    check_derivation,
    coin,
    denote,
    hom_distance,
    nf_to_term,
    par,
    phi_p,
    seq,
    serialize_derivation,
    star,
    synthesize_from_map,
    synthesize_tight_derivation,
    typecheck,
)
from pbc.combinators import copy_at, otp_lhs, otp_rhs, xor_gate
from pbc.proofs import (
    PAR_LEFT,
    PHI_MIX,
    REFL,
    SEQ_LEFT,
    SYM,
    TOP,
    TRIANGLE,
    WEAKEN,
)

from circuitgen import random_circuit
from test_semantics import random_dist


def dist_term(dist, n_out):
    """A closed term denoting the given distribution."""
    return nf_to_term(synthesize_from_map(StochMap(0, n_out, (dist,))))


def exact_distance(f, g):
    return hom_distance(denote(f), denote(g))


# ---------------------------------------------------------------------------
# Rule checking on the contract examples.

def test_refl_checks_to_zero():
    t = xor_gate()
    d = Derivation(REFL, (t, t), 0)
    assert check_derivation(d) == 0


def test_top_checks_to_one():
    d = Derivation(TOP, (coin(1), coin(0)), 1)
    assert check_derivation(d) == 1


def test_mix_rule_weighs_the_arm_bounds():
    p = Fraction(2, 5)
    lhs = Seq(Par(coin(1), coin(0)), phi_p(B, p))
    rhs = Seq(Par(coin(0), coin(0)), phi_p(B, p))
    arms = (
        Derivation(TOP, (coin(1), coin(0)), 1),
        Derivation(REFL, (coin(0), coin(0)), 0),
    )
    d = Derivation(PHI_MIX, (lhs, rhs), p, arms, param=p)
    assert check_derivation(d) == p
    assert exact_distance(lhs, rhs) == p


def test_triangle_adds_exactly():
    a, b, c = coin(0), coin("1/2"), coin(1)
    d = Derivation(
        TRIANGLE, (a, c), 1,
        (synthesize_tight_derivation(a, b),
         synthesize_tight_derivation(b, c)))
    assert check_derivation(d) == 1


def test_sym_flips_the_endpoints():
    a, b = coin("1/4"), coin("3/4")
    inner = synthesize_tight_derivation(a, b)
    d = Derivation(SYM, (b, a), inner.bound, (inner,))
    assert check_derivation(d) == Fraction(1, 2)


def test_congruence_shares_the_other_factor():
    f, g = coin("1/2"), coin("3/4")
    inner = synthesize_tight_derivation(f, g)
    shared = xor_gate()
    left = Derivation(
        PAR_LEFT, (Par(f, Id(B)), Par(g, Id(B))), inner.bound, (inner,))
    assert check_derivation(left) == Fraction(1, 4)
    grown = Derivation(
        SEQ_LEFT,
        (Seq(Par(f, Id(B)), shared), Seq(Par(g, Id(B)), shared)),
        left.bound, (left,))
    assert check_derivation(grown) == Fraction(1, 4)
    assert exact_distance(*grown.endpoints) <= Fraction(1, 4)


# ---------------------------------------------------------------------------
# Synthesizer.

def test_synthesis_of_identical_terms_is_refl():
    t = seq(coin("1/2"), Id(B))
    d = synthesize_tight_derivation(t, t)
    assert d.rule == REFL
    assert d.bound == 0


def test_synthesis_on_biased_coins_is_exact():
    d = synthesize_tight_derivation(coin("3/4"), coin("1/4"))
    assert check_derivation(d) == Fraction(1, 2)


def test_synthesis_proves_the_pad_correct():
    d = synthesize_tight_derivation(otp_lhs(), otp_rhs())
    assert check_derivation(d) == 0
    assert d.rule == REFL


def test_synthesis_beats_the_naive_first_bit_split():
    # On these two distributions a split along the first output bit
    # would cost 7/8; the true distance, and the synthesized bound,
    # is 3/4.
    v = {0b10: Fraction(1, 4), 0b11: Fraction(3, 4)}
    w = {0b10: Fraction(1, 2), 0b00: Fraction(1, 2)}
    f, g = dist_term(v, 2), dist_term(w, 2)
    d = synthesize_tight_derivation(f, g)
    assert check_derivation(d) == Fraction(3, 4)
    assert exact_distance(f, g) == Fraction(3, 4)


def test_synthesis_is_tight_on_random_closed_distributions():
    rng = random.Random(2718)
    for _ in range(80):
        n = rng.randint(1, 3)
        f = dist_term(random_dist(rng, n), n)
        g = dist_term(random_dist(rng, n), n)
        d = synthesize_tight_derivation(f, g)
        assert check_derivation(d) == exact_distance(f, g)


def test_synthesis_is_tight_on_random_circuit_pairs():
    rng = random.Random(3141)
    done = 0
    while done < 60:
        n_in, n_out = rng.randint(0, 2), rng.randint(0, 2)
        f = random_circuit(rng, n_in, n_out)
        g = random_circuit(rng, n_in, n_out)
        d = synthesize_tight_derivation(f, g)
        assert check_derivation(d) == exact_distance(f, g)
        done += 1


# ---------------------------------------------------------------------------
# Soundness under random decoration.

def _decorated(rng, depth=2):
    n_in, n_out = rng.randint(0, 1), rng.randint(1, 2)
    f = random_circuit(rng, n_in, n_out, max_gens=6)
    g = random_circuit(rng, n_in, n_out, max_gens=6)
    d = synthesize_tight_derivation(f, g)
    for _ in range(depth):
        kind = rng.choice(("weaken", "sym", "triangle", "par"))
        a, b = d.endpoints
        if kind == "weaken":
            extra = Fraction(rng.randint(1, 4), 8)
            d = Derivation(WEAKEN, (a, b), min(d.bound + extra, 2), (d,))
        elif kind == "sym":
            d = Derivation(SYM, (b, a), d.bound, (d,))
        elif kind == "triangle":
            h = random_circuit(rng, *_arity(b), max_gens=6)
            step = synthesize_tight_derivation(b, h)
            d = Derivation(TRIANGLE, (a, h), d.bound + step.bound, (d, step))
        else:
            d = Derivation(
                PAR_LEFT, (Par(a, Id(B)), Par(b, Id(B))), d.bound, (d,))
    return d


def _arity(t):
    j = typecheck(t)
    return len(j.domain), len(j.codomain)


def test_decorated_derivations_stay_sound():
    rng = random.Random(11235)
    for _ in range(40):
        d = _decorated(rng)
        bound = check_derivation(d)
        assert bound >= exact_distance(*d.endpoints)


# ---------------------------------------------------------------------------
# Malformed derivations are rejected.

def test_refl_on_distinct_denotations_is_rejected():
    d = Derivation(REFL, (coin(1), coin(0)), 0)
    with pytest.raises(PBCProofError):
        check_derivation(d)


def test_wrong_top_bound_is_rejected():
    d = Derivation(TOP, (coin(1), coin(0)), Fraction(1, 2))
    with pytest.raises(PBCProofError):
        check_derivation(d)


def test_triangle_sum_must_be_exact():
    a, b, c = coin(0), coin("1/2"), coin(1)
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(
            TRIANGLE, (a, c), Fraction(3, 4),
            (synthesize_tight_derivation(a, b),
             synthesize_tight_derivation(b, c))))


def test_triangle_premises_must_chain():
    a, b = coin(0), coin(1)
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(
            TRIANGLE, (a, b), 0,
            (Derivation(REFL, (a, a), 0),
             Derivation(REFL, (b, b), 0))))


def test_weaken_cannot_shrink():
    inner = synthesize_tight_derivation(coin(0), coin(1))
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(
            WEAKEN, inner.endpoints, Fraction(1, 2), (inner,)))


def test_mix_parameter_must_match_the_coin():
    p = Fraction(2, 5)
    lhs = Seq(Par(coin(1), coin(0)), phi_p(B, p))
    rhs = Seq(Par(coin(0), coin(0)), phi_p(B, p))
    arms = (
        Derivation(TOP, (coin(1), coin(0)), 1),
        Derivation(REFL, (coin(0), coin(0)), 0),
    )
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(
            PHI_MIX, (lhs, rhs), Fraction(3, 5), arms,
            param=Fraction(3, 5)))


def test_mismatched_endpoint_types_are_rejected():
    d = Derivation(TOP, (coin(1), Id(B)), 1)
    with pytest.raises(PBCProofError):
        check_derivation(d)


def test_congruence_must_share_a_factor():
    f, g = coin("1/2"), coin("3/4")
    inner = synthesize_tight_derivation(f, g)
    good = Derivation(
        SEQ_LEFT, (Seq(f, Id(B)), Seq(g, Id(B))), inner.bound, (inner,))
    assert check_derivation(good) == inner.bound
    unshared = Derivation(
        SEQ_LEFT,
        (Seq(f, Id(B)), Seq(g, seq(Id(B), Id(B)))),
        inner.bound, (inner,))
    with pytest.raises(PBCProofError):
        check_derivation(unshared)


def test_star_typed_endpoints_are_rejected():
    t = copy_at(star(B))
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(REFL, (t, t), 0))


def test_negative_bound_is_rejected():
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(REFL, (coin(1), coin(1)), -1))


def test_param_is_exclusive_to_the_mix_rule():
    with pytest.raises(PBCProofError):
        check_derivation(Derivation(
            REFL, (coin(1), coin(1)), 0, param=Fraction(1, 2)))


# ---------------------------------------------------------------------------
# Serialization.

def test_serialization_golden():
    inner = Derivation(REFL, (coin(1), coin(1)), 0)
    outer = Derivation(
        WEAKEN, (coin(1), coin(1)), Fraction(1, 4), (inner,))
    assert serialize_derivation(outer) == ("Weaken 1/4\n"
                                           "  Refl 0/1")


def test_serialization_labels_the_mix_weight():
    p = Fraction(2, 5)
    lhs = Seq(Par(coin(1), coin(0)), phi_p(B, p))
    rhs = Seq(Par(coin(0), coin(0)), phi_p(B, p))
    d = Derivation(
        PHI_MIX, (lhs, rhs), p,
        (Derivation(TOP, (coin(1), coin(0)), 1),
         Derivation(REFL, (coin(0), coin(0)), 0)),
        param=p)
    assert serialize_derivation(d) == ("PhiMix(2/5) 2/5\n"
                                       "  Top 1/1\n"
                                       "  Refl 0/1")
