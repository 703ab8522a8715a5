import random

import pytest

from icrl import prover
from icrl.corpus import gen_sequent, gen_term
from icrl.prover import (
    CUT,
    GENAX_ID,
    ID,
    LG_W,
    Proof,
    check_proof,
    check_proof_detailed,
    decide_equation,
    make_cut,
    proof_from_json,
    proof_to_json,
    search,
    search_lgw_explicit,
)
from icrl.terms import (
    E,
    Fuse,
    LDiv,
    RDiv,
    Sequent,
    Theory,
    Var,
    parse_sequent,
    parse_term,
)

x, y = Var("x"), Var("y")


def seq(text, th=Theory.ICRL):
    return parse_sequent(text, th)


def test_integrally_closed_axioms_derivable():
    assert search(seq("x \\ x => e"), Theory.ICRL).derivable
    assert search(seq("x / x => e"), Theory.ICRL).derivable
    assert not search(seq("x \\ x => e"), Theory.RL).derivable
    assert not search(seq("x / x => e"), Theory.RL).derivable


def test_genaxid_example():
    out = search(seq("x, x \\ e, y => y"), Theory.ICRL)
    assert out.derivable
    assert out.proof.rule == GENAX_ID
    assert out.proof.certificates and out.proof.certificates[0].oracle == "lg"
    assert check_proof(out.proof, Theory.ICRL, allow_cut=False)


def test_explicit_formulation_examples():
    out = search_lgw_explicit(seq("x, x \\ e, y => y"), Theory.ICRL)
    assert out.derivable
    assert any(n.rule == LG_W for n in out.proof.walk())
    assert check_proof(out.proof, Theory.ICRL, allow_cut=False)
    assert search_lgw_explicit(seq("x \\ x => e"), Theory.ICRL).derivable
    assert not search_lgw_explicit(seq("e => x"), Theory.ICRL).derivable


def test_not_derivable_examples():
    assert not search(seq("e => x"), Theory.ICRL).derivable
    assert not search(seq("x => e"), Theory.ICRL).derivable


def test_decide_equation_lemma_equivalences():
    # ~(x \ y) = ~y / ~x   and   ~(y / x) = ~x \ ~y   hold in icrl
    s1 = parse_term("~(x \\ y)")
    t1 = parse_term("~y / ~x")
    assert decide_equation(s1, t1, Theory.ICRL)
    s2 = parse_term("~(y / x)")
    t2 = parse_term("~x \\ ~y")
    assert decide_equation(s2, t2, Theory.ICRL)
    assert not decide_equation(x, E, Theory.ICRL)


def test_casari_f_idempotent():
    th = Theory.CA
    assert search(seq("f * f => f", th), th).derivable
    assert search(seq("f => f * f", th), th).derivable
    assert decide_equation(parse_term("f * f", th), parse_term("f", th), th)


def test_casari_empty_succedent_needs_f():
    th = Theory.CA
    assert search(seq("f =>", th), th).derivable
    assert not search(seq("x =>", th), th).derivable
    assert not search(seq("x, y =>", th), th).derivable
    assert not search(seq("=>", th), th).derivable


def test_commutative_modes():
    assert search(seq("x * y => y * x", Theory.CICRL), Theory.CICRL).derivable
    assert not search(seq("x * y => y * x"), Theory.ICRL).derivable
    assert search(seq("x -> y, x => y", Theory.CICRL), Theory.CICRL).derivable
    assert search(seq("x, x -> y => y", Theory.BCI), Theory.BCI).derivable


def test_irl_weakening():
    assert search(seq("x => e"), Theory.IRL).derivable
    assert search(seq("x, y => y"), Theory.IRL).derivable
    assert not search(seq("x => e"), Theory.RL).derivable
    assert not search(seq("e => x"), Theory.IRL).derivable


def test_check_proof_examples():
    p = Proof(Sequent((x,), (x,)), ID)
    assert check_proof(p, Theory.RL)
    # a fuse-right node whose split is inconsistent with its premises
    bad = Proof(
        Sequent((x, y), (Fuse(x, y),)),
        "fuse-right",
        (Proof(Sequent((y,), (x,)), ID), Proof(Sequent((x,), (y,)), ID)),
    )
    ok, path, msg = check_proof_detailed(bad, Theory.RL)
    assert not ok
    # id premises are themselves broken, but the root must already fail
    good = Proof(
        Sequent((x, y), (Fuse(x, y),)),
        "fuse-right",
        (Proof(Sequent((x,), (x,)), ID), Proof(Sequent((y,), (y,)), ID)),
    )
    assert check_proof(good, Theory.RL)


def test_check_proof_cut_gating():
    d1 = Proof(Sequent((x,), (x,)), ID)
    d2 = Proof(Sequent((x,), (x,)), ID)
    cut = make_cut(d1, d2, 0)
    assert cut.rule == CUT
    assert check_proof(cut, Theory.RL, allow_cut=True)
    assert not check_proof(cut, Theory.RL, allow_cut=False)


def test_search_proofs_pass_cut_free_checker():
    rng = random.Random(1234)
    theories = [
        Theory.RL,
        Theory.IRL,
        Theory.ICRL,
        Theory.CICRL,
        Theory.SIRM,
        Theory.PSEUDO_BCI,
        Theory.SIRCOM,
        Theory.BCI,
    ]
    checked = 0
    for i in range(400):
        th = theories[i % len(theories)]
        s = gen_sequent(rng, num_vars=2, depth=2, lattice=th.has_lattice_ops, fuse=th.has_fuse)
        out = search(s, th)
        if out.derivable:
            assert check_proof(out.proof, th, allow_cut=False), (th, s)
            assert out.proof.conclusion == s
            checked += 1
    assert checked > 40


def test_ca_search_proofs_pass_checker():
    from icrl.terms import normalize_for_theory

    rng = random.Random(77)
    checked = 0
    for _ in range(200):
        s = gen_sequent(
            rng, num_vars=2, depth=2, max_left=2, max_right=2, pointed=True
        )
        out = search(s, Theory.CA)
        if out.derivable:
            norm = Sequent(
                tuple(normalize_for_theory(t, Theory.CA) for t in s.left),
                tuple(normalize_for_theory(t, Theory.CA) for t in s.right),
            )
            assert check_proof(out.proof, Theory.CA, allow_cut=False), s
            assert out.proof.conclusion == norm
            checked += 1
    assert checked > 15


def test_formulations_agree_quick():
    rng = random.Random(5150)
    for _ in range(60):
        s = gen_sequent(rng, num_vars=2, depth=2)
        a = search(s, Theory.ICRL).derivable
        b = search_lgw_explicit(s, Theory.ICRL).derivable
        assert a == b, s


def test_theory_monotonicity_on_corpus():
    rng = random.Random(99)
    for _ in range(80):
        s = gen_sequent(rng, num_vars=2, depth=2)
        if search(s, Theory.RL).derivable:
            assert search(s, Theory.ICRL).derivable, s
        if search(s, Theory.ICRL).derivable:
            assert search(s, Theory.CICRL).derivable, s


def test_proof_json_round_trip_bit_exact():
    out = search(seq("x, x \\ e, y => y"), Theory.ICRL)
    blob = proof_to_json(out.proof)
    back = proof_from_json(blob, Theory.ICRL)
    assert back == out.proof
    assert proof_to_json(back) == blob
    out2 = search_lgw_explicit(seq("x \\ x, e => e"), Theory.ICRL)
    blob2 = proof_to_json(out2.proof)
    assert proof_to_json(proof_from_json(blob2, Theory.ICRL)) == blob2


def test_outcome_statistics_present():
    prover.clear_caches()  # goal memoization is shared across calls
    out = search(seq("x \\ x => e"), Theory.RL)
    assert not out.derivable
    assert out.proof is None
    assert out.nodes_expanded >= 1
    assert out.max_depth >= 0


def test_m_sequent_shape_enforced():
    with pytest.raises(ValueError):
        search(Sequent((parse_term("x /\\ y"),), (E,)), Theory.SIRM)
    with pytest.raises(ValueError):
        search(Sequent((Fuse(x, y),), (E,)), Theory.PSEUDO_BCI)
