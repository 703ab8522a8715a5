"""Backward cut-free proof search, proof checking, and proof serialization.

Search is exhaustive backtracking over the backward-readable rule instances,
memoized per goal with failure caching; termination needs no loop check
because every premise of every rule has strictly smaller total complexity
(weakening steps must delete a non-empty block).

Two formulations of the oracle-weakening rule are implemented:

* `search` uses the pushed-up axiom form: generalized identity axioms
  (context around the identity formula validated block-wise by the oracle)
  and generalized unit axioms (whole left side validated).
* `search_lgw_explicit` keeps plain axioms and applies the weakening rule
  itself backward, deleting oracle-validated blocks.

The two must agree; the corpus suites cross-check them.

Commutative theories are searched over multiset-quotiented sequents and the
found derivation is then linearized: rule nodes are emitted in a convenient
literal order and explicit exchange steps rewrite them into the requested
one, so every emitted proof passes the sequence-literal checker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import ablg_oracle, lg_oracle
from .terms import (
    ConstE,
    ConstF,
    E,
    Fuse,
    Join,
    LDiv,
    Meet,
    RDiv,
    Sequent,
    Term,
    Theory,
    check_sequent_for_theory,
    normalize_for_theory,
    parse_sequent,
    print_sequent,
    print_term,
    sequent_complexity,
)

# rule names (stable strings; these appear in proof JSON)
ID = "id"
CUT = "cut"
E_LEFT = "e-left"
E_RIGHT = "e-right"
F_LEFT = "f-left"
F_RIGHT = "f-right"
FUSE_LEFT = "fuse-left"
FUSE_RIGHT = "fuse-right"
MEET_LEFT_1 = "meet-left-1"
MEET_LEFT_2 = "meet-left-2"
MEET_RIGHT = "meet-right"
JOIN_LEFT = "join-left"
JOIN_RIGHT_1 = "join-right-1"
JOIN_RIGHT_2 = "join-right-2"
LDIV_LEFT = "ldiv-left"
LDIV_RIGHT = "ldiv-right"
RDIV_LEFT = "rdiv-left"
RDIV_RIGHT = "rdiv-right"
ARROW_LEFT = "arrow-left"
ARROW_RIGHT = "arrow-right"
LG_W = "lg-w"
ABLG_W = "ablg-w"
W = "w"
EL = "el"
ER = "er"
GENAX_ID = "genax-id"
GENAX_E = "genax-e"

_BASE_LATTICE = frozenset(
    {
        ID,
        CUT,
        E_LEFT,
        E_RIGHT,
        FUSE_LEFT,
        FUSE_RIGHT,
        MEET_LEFT_1,
        MEET_LEFT_2,
        MEET_RIGHT,
        JOIN_LEFT,
        JOIN_RIGHT_1,
        JOIN_RIGHT_2,
        LDIV_LEFT,
        LDIV_RIGHT,
        RDIV_LEFT,
        RDIV_RIGHT,
    }
)
_BASE_MONOID = frozenset(
    {ID, CUT, E_LEFT, E_RIGHT, FUSE_LEFT, FUSE_RIGHT, LDIV_LEFT, LDIV_RIGHT, RDIV_LEFT, RDIV_RIGHT}
)

_RULES: dict[Theory, frozenset[str]] = {
    Theory.RL: _BASE_LATTICE,
    Theory.IRL: _BASE_LATTICE | {W},
    Theory.ICRL: _BASE_LATTICE | {LG_W, GENAX_ID, GENAX_E},
    Theory.CICRL: _BASE_LATTICE | {EL, ABLG_W, GENAX_ID, GENAX_E},
    Theory.SIRM: _BASE_MONOID | {LG_W, GENAX_ID, GENAX_E},
    Theory.PSEUDO_BCI: (_BASE_MONOID - {FUSE_LEFT, FUSE_RIGHT}) | {LG_W, GENAX_ID, GENAX_E},
    Theory.SIRCOM: _BASE_MONOID | {EL, ABLG_W, GENAX_ID, GENAX_E},
    Theory.BCI: (_BASE_MONOID - {FUSE_LEFT, FUSE_RIGHT}) | {EL, ABLG_W, GENAX_ID, GENAX_E},
    Theory.CA: frozenset(
        {
            ID,
            CUT,
            EL,
            ER,
            E_LEFT,
            E_RIGHT,
            F_LEFT,
            F_RIGHT,
            FUSE_LEFT,
            FUSE_RIGHT,
            MEET_LEFT_1,
            MEET_LEFT_2,
            MEET_RIGHT,
            JOIN_LEFT,
            JOIN_RIGHT_1,
            JOIN_RIGHT_2,
            ARROW_LEFT,
            ARROW_RIGHT,
            ABLG_W,
        }
    ),
}


def allowed_rules(theory: Theory) -> frozenset[str]:
    return _RULES[theory]


@dataclass(frozen=True)
class Certificate:
    """Record of an oracle-validated side-condition."""

    oracle: str
    sequent: Sequent


@dataclass(frozen=True)
class Proof:
    conclusion: Sequent
    rule: str
    premises: tuple["Proof", ...] = ()
    certificates: tuple[Certificate, ...] = ()

    def walk(self):
        yield self
        for p in self.premises:
            yield from p.walk()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass
class SearchOutcome:
    derivable: bool
    proof: Proof | None
    nodes_expanded: int
    max_depth: int


def oracle_valid(oracle: str, s: Sequent) -> bool:
    if oracle == "lg":
        return lg_oracle.lg_valid_sequent(s)
    if oracle == "ablg":
        return ablg_oracle.ablg_valid_sequent(s)
    raise ValueError(f"unknown oracle {oracle!r}")


# --- proof JSON ----------------------------------------------------------------


def proof_to_dict(p: Proof) -> dict:
    d: dict = {
        "conclusion": print_sequent(p.conclusion),
        "rule": p.rule,
        "premises": [proof_to_dict(q) for q in p.premises],
    }
    if p.certificates:
        d["certificate"] = {
            "oracle": p.certificates[0].oracle,
            "sequents": [print_sequent(c.sequent) for c in p.certificates],
        }
    return d


def proof_to_json(p: Proof) -> str:
    return json.dumps(proof_to_dict(p), indent=2, sort_keys=True) + "\n"


def proof_from_dict(d: dict, theory: Theory) -> Proof:
    if not isinstance(d, dict):
        raise ValueError("malformed proof node: expected an object")
    try:
        conclusion = d["conclusion"]
        rule = d["rule"]
    except KeyError as missing:
        raise ValueError(f"malformed proof node: missing key {missing}") from None
    certs = ()
    if "certificate" in d:
        c = d["certificate"]
        try:
            certs = tuple(
                Certificate(c["oracle"], parse_sequent(s, theory)) for s in c["sequents"]
            )
        except (KeyError, TypeError):
            raise ValueError("malformed certificate: expected {oracle, sequents}") from None
    return Proof(
        conclusion=parse_sequent(conclusion, theory),
        rule=rule,
        premises=tuple(proof_from_dict(q, theory) for q in d.get("premises", ())),
        certificates=certs,
    )


def proof_from_json(text: str, theory: Theory) -> Proof:
    return proof_from_dict(json.loads(text), theory)


# --- schema analysis / checking -------------------------------------------------

# An analysis is a dict describing one way a node instantiates its rule schema;
# "obligations" lists the oracle queries the instantiation depends on.


def _without(seq: tuple, i: int) -> tuple:
    return seq[:i] + seq[i + 1 :]


def _analyses(node: Proof, theory: Theory):
    """Yield candidate instantiations of node's rule schema (obligations unchecked)."""
    rule = node.rule
    concl = node.conclusion
    prem = node.premises
    L, R = concl.left, concl.right
    multiple = theory.multiple_conclusion

    def single_right_ok():
        return len(R) == 1

    if rule == ID:
        if not prem and len(L) == 1 and len(R) == 1 and L[0] == R[0]:
            yield {}
        return

    if rule == E_RIGHT:
        if not prem and not L and R == (E,):
            yield {}
        return

    if rule == F_LEFT:
        if not prem and L == (ConstF(),) and R == ():
            yield {}
        return

    if rule == GENAX_E:
        if not prem and single_right_ok() and R[0] == E:
            yield {"obligations": [Sequent(L, (E,))]}
        return

    if rule == GENAX_ID:
        if not prem and single_right_ok():
            u = R[0]
            for i, t in enumerate(L):
                if t == u:
                    yield {
                        "i": i,
                        "obligations": [Sequent(L[:i], (E,)), Sequent(L[i + 1 :], (E,))],
                    }
        return

    if len(prem) == 1:
        (p,) = prem
        pL, pR = p.conclusion.left, p.conclusion.right

        if rule == E_LEFT:
            if pR == R:
                for i, t in enumerate(L):
                    if t == E and pL == _without(L, i):
                        yield {"i": i}
            return

        if rule == F_RIGHT:
            if pL == L:
                for i, t in enumerate(R):
                    if isinstance(t, ConstF) and pR == _without(R, i):
                        yield {"i": i}
            return

        if rule == FUSE_LEFT:
            if pR == R:
                for i, t in enumerate(L):
                    if isinstance(t, Fuse) and pL == L[:i] + (t.l, t.r) + L[i + 1 :]:
                        yield {"i": i}
            return

        if rule in (MEET_LEFT_1, MEET_LEFT_2):
            if pR == R:
                for i, t in enumerate(L):
                    if isinstance(t, Meet):
                        sub = t.l if rule == MEET_LEFT_1 else t.r
                        if pL == L[:i] + (sub,) + L[i + 1 :]:
                            yield {"i": i}
            return

        if rule in (JOIN_RIGHT_1, JOIN_RIGHT_2):
            if pL == L:
                for i, t in enumerate(R):
                    if isinstance(t, Join):
                        sub = t.l if rule == JOIN_RIGHT_1 else t.r
                        if pR == R[:i] + (sub,) + R[i + 1 :]:
                            if multiple or (single_right_ok() and i == 0):
                                yield {"i": i}
            return

        if rule == LDIV_RIGHT:
            # single-conclusion: G => s \ t  from  s, G => t
            # ca: G => s -> t, D  from  G, s => t, D   (arrow-right is used there)
            if not multiple and single_right_ok() and isinstance(R[0], LDiv):
                t = R[0]
                if pL == (t.l,) + L and pR == (t.r,):
                    yield {}
            return

        if rule == RDIV_RIGHT:
            if not multiple and single_right_ok() and isinstance(R[0], RDiv):
                t = R[0]
                if pL == L + (t.r,) and pR == (t.l,):
                    yield {}
            return

        if rule == ARROW_RIGHT:
            if multiple and R and isinstance(R[0], LDiv):
                t = R[0]
                if pL == L + (t.l,) and pR == (t.r,) + R[1:]:
                    yield {}
            return

        if rule == W:
            # vacuous instances (empty block) are schema-valid
            for i in range(len(L) + 1):
                for j in range(i, len(L) + 1):
                    if pL == L[:i] + L[j:] and pR == R:
                        yield {"i": i, "j": j}
            return

        if rule in (LG_W, ABLG_W) and not multiple:
            for i in range(len(L) + 1):
                for j in range(i, len(L) + 1):
                    if pL == L[:i] + L[j:] and pR == R:
                        yield {"i": i, "j": j, "obligations": [Sequent(L[i:j], (E,))]}
            return

        if rule == ABLG_W and multiple:
            nl, nr = len(pL), len(pR)
            if L[:nl] == pL and R[:nr] == pR:
                yield {"obligations": [Sequent(L[nl:], R[nr:])]}
            return

        if rule == EL:
            if pR == R and len(pL) == len(L):
                n = len(L)
                for a in range(n + 1):
                    for b in range(a, n + 1):
                        for c in range(b, n + 1):
                            # L = G1 P1 P2 G2 with P1 = L[a:b], P2 = L[b:c]
                            if pL == L[:a] + L[b:c] + L[a:b] + L[c:]:
                                yield {"a": a, "b": b, "c": c}
            return

        if rule == ER:
            if pL == L and len(pR) == len(R):
                n = len(R)
                for a in range(n + 1):
                    for b in range(a, n + 1):
                        for c in range(b, n + 1):
                            if pR == R[:a] + R[b:c] + R[a:b] + R[c:]:
                                yield {"a": a, "b": b, "c": c}
            return

        return

    if len(prem) == 2:
        p1, p2 = prem
        p1L, p1R = p1.conclusion.left, p1.conclusion.right
        p2L, p2R = p2.conclusion.left, p2.conclusion.right

        if rule == CUT:
            if not multiple:
                if len(p1R) == 1 and p2R == R:
                    s = p1R[0]
                    for j, t in enumerate(p2L):
                        if t == s and L == p2L[:j] + p1L + p2L[j + 1 :]:
                            yield {"j": j}
            else:
                if p1R:
                    s = p1R[0]
                    d1 = p1R[1:]
                    if R == d1 + p2R:
                        for j, t in enumerate(p2L):
                            if t == s and L == p2L[:j] + p1L + p2L[j + 1 :]:
                                yield {"j": j}
            return

        if rule == JOIN_LEFT:
            if p1R == R and p2R == R:
                for i, t in enumerate(L):
                    if isinstance(t, Join):
                        if p1L == L[:i] + (t.l,) + L[i + 1 :] and p2L == L[:i] + (t.r,) + L[i + 1 :]:
                            yield {"i": i}
            return

        if rule == MEET_RIGHT:
            if p1L == L and p2L == L:
                for i, t in enumerate(R):
                    if isinstance(t, Meet):
                        if p1R == R[:i] + (t.l,) + R[i + 1 :] and p2R == R[:i] + (t.r,) + R[i + 1 :]:
                            if multiple or (single_right_ok() and i == 0):
                                yield {"i": i}
            return

        if rule == FUSE_RIGHT:
            if not multiple:
                if single_right_ok() and isinstance(R[0], Fuse):
                    t = R[0]
                    if p1R == (t.l,) and p2R == (t.r,):
                        k = len(p1L)
                        if L == p1L + p2L:
                            yield {"k": k}
            else:
                if R and isinstance(R[0], Fuse):
                    t = R[0]
                    if p1R and p1R[0] == t.l and p2R and p2R[0] == t.r:
                        if L == p1L + p2L and R[1:] == p1R[1:] + p2R[1:]:
                            yield {}
            return

        if rule == LDIV_LEFT:
            # G1, G2, s \ t, G3 => u   from   G2 => s   and   G1, t, G3 => u
            if not multiple and len(p1R) == 1 and p2R == R:
                for i, t in enumerate(L):
                    if isinstance(t, LDiv) and t.l == p1R[0]:
                        k = i - len(p1L)
                        if k >= 0 and L[k:i] == p1L:
                            if p2L == L[:k] + (t.r,) + L[i + 1 :]:
                                yield {"i": i, "k": k}
            return

        if rule == RDIV_LEFT:
            # G1, t / s, G2, G3 => u   from   G2 => s   and   G1, t, G3 => u
            if not multiple and len(p1R) == 1 and p2R == R:
                for i, t in enumerate(L):
                    if isinstance(t, RDiv) and t.r == p1R[0]:
                        j = i + 1 + len(p1L)
                        if j <= len(L) and L[i + 1 : j] == p1L:
                            if p2L == L[:i] + (t.l,) + L[j:]:
                                yield {"i": i, "j": j}
            return

        if rule == ARROW_LEFT:
            # G1, s -> t, G2, G3 => D1, D2  from  G2 => s, D2  and  G1, t, G3 => D1
            if multiple and p1R:
                s = p1R[0]
                d2 = p1R[1:]
                d1 = p2R
                if R == d1 + d2:
                    for i, t in enumerate(L):
                        if isinstance(t, LDiv) and t.l == s:
                            j = i + 1 + len(p1L)
                            if j <= len(L) and L[i + 1 : j] == p1L:
                                if p2L == L[:i] + (t.r,) + L[j:]:
                                    yield {"i": i, "j": j}
            return

        return


class CheckFailure(Exception):
    def __init__(self, path: tuple[int, ...], message: str):
        super().__init__(message)
        self.path = path
        self.message = message


def _check_node(node: Proof, theory: Theory, allow_cut: bool, path: tuple[int, ...]):
    if node.rule == CUT and not allow_cut:
        raise CheckFailure(path, "cut rule used but cuts are disallowed")
    if node.rule not in allowed_rules(theory):
        raise CheckFailure(path, f"rule {node.rule} not available in theory {theory.value}")
    ok = False
    for analysis in _analyses(node, theory):
        obligations = analysis.get("obligations", [])
        if all(oracle_valid(theory.oracle, s) for s in obligations):
            ok = True
            break
    if not ok:
        raise CheckFailure(path, f"node does not instantiate rule {node.rule}")
    # recorded certificates must themselves re-validate
    for cert in node.certificates:
        if theory.oracle is None or cert.oracle != theory.oracle:
            raise CheckFailure(path, f"certificate oracle {cert.oracle!r} wrong for theory")
        if not oracle_valid(cert.oracle, cert.sequent):
            raise CheckFailure(path, f"certificate failed re-validation: {print_sequent(cert.sequent)}")
    for idx, premise in enumerate(node.premises):
        _check_node(premise, theory, allow_cut, path + (idx,))


def check_proof(p: Proof, theory: Theory, allow_cut: bool = False) -> bool:
    try:
        _check_node(p, theory, allow_cut, ())
    except CheckFailure:
        return False
    return True


def check_proof_detailed(p: Proof, theory: Theory, allow_cut: bool = False):
    """(ok, path-to-failing-node, message)."""
    try:
        _check_node(p, theory, allow_cut, ())
    except CheckFailure as e:
        return False, e.path, e.message
    return True, None, None


def analyze_node(node: Proof, theory: Theory) -> dict:
    """First schema instantiation whose obligations hold; raises if none."""
    for analysis in _analyses(node, theory):
        if all(oracle_valid(theory.oracle, s) for s in analysis.get("obligations", [])):
            return analysis
    raise CheckFailure((), f"node does not instantiate rule {node.rule}")


# --- backward search -------------------------------------------------------------


@dataclass
class _Step:
    rule: str
    data: dict
    premises: list["_Step"]


@dataclass
class _Ctx:
    theory: Theory
    explicit: bool
    memo: dict
    nodes: int = 0
    max_depth: int = 0

    def oracle_e(self, terms: tuple[Term, ...]) -> bool:
        return oracle_valid(self.theory.oracle, Sequent(terms, (E,)))

    def oracle_seq(self, left: tuple[Term, ...], right: tuple[Term, ...]) -> bool:
        return oracle_valid(self.theory.oracle, Sequent(left, right))


_MEMO: dict[tuple[Theory, bool], dict] = {}


def clear_caches():
    _MEMO.clear()


def _term_key(t: Term) -> str:
    return print_term(t)


def _sort_ms(terms) -> tuple[Term, ...]:
    return tuple(sorted(terms, key=_term_key))


def _ms_remove(ms: tuple, item: Term) -> tuple:
    i = ms.index(item)
    return ms[:i] + ms[i + 1 :]


def _ms_subtract(ms: tuple, sub: tuple) -> tuple:
    out = list(ms)
    for t in sub:
        out.remove(t)
    return tuple(out)


def _submultisets(ms: tuple):
    """All sub-multisets of a sorted tuple, distinct as multisets."""
    if not ms:
        yield ()
        return
    # group equal elements, choose a count for each group
    groups: list[tuple[Term, int]] = []
    for t in ms:
        if groups and groups[-1][0] == t:
            groups[-1] = (t, groups[-1][1] + 1)
        else:
            groups.append((t, 1))

    def go(idx: int):
        if idx == len(groups):
            yield ()
            return
        t, n = groups[idx]
        for rest in go(idx + 1):
            for k in range(n + 1):
                yield (t,) * k + rest

    yield from go(0)


def _contiguous_blocks(n: int):
    for i in range(n):
        for j in range(i + 1, n + 1):
            yield i, j


# Alternative generators yield (rule, data, premise_goals).  Goals are
# (left, right) pairs; multiset modes keep both sides sorted.


def _alts_sequence(goal, ctx: _Ctx):
    L, R = goal
    u = R[0]
    th = ctx.theory
    rules = allowed_rules(th)

    # axioms
    if len(L) == 1 and L[0] == u:
        yield ID, {}, []
    if not L and u == E:
        yield E_RIGHT, {}, []
    if not ctx.explicit and GENAX_E in rules and u == E and ctx.oracle_e(L):
        yield GENAX_E, {"certs": (Sequent(L, (E,)),)}, []
    if not ctx.explicit and GENAX_ID in rules:
        for i, t in enumerate(L):
            if t == u and ctx.oracle_e(L[:i]) and ctx.oracle_e(L[i + 1 :]):
                yield GENAX_ID, {"i": i, "certs": (Sequent(L[:i], (E,)), Sequent(L[i + 1 :], (E,)))}, []

    # single-premise rules
    for i, t in enumerate(L):
        if t == E:
            yield E_LEFT, {"i": i}, [(_without(L, i), R)]
    if FUSE_LEFT in rules:
        for i, t in enumerate(L):
            if isinstance(t, Fuse):
                yield FUSE_LEFT, {"i": i}, [(L[:i] + (t.l, t.r) + L[i + 1 :], R)]
    for i, t in enumerate(L):
        if isinstance(t, Meet) and MEET_LEFT_1 in rules:
            yield MEET_LEFT_1, {"i": i}, [(L[:i] + (t.l,) + L[i + 1 :], R)]
            yield MEET_LEFT_2, {"i": i}, [(L[:i] + (t.r,) + L[i + 1 :], R)]
    if isinstance(u, Join) and JOIN_RIGHT_1 in rules:
        yield JOIN_RIGHT_1, {}, [(L, (u.l,))]
        yield JOIN_RIGHT_2, {}, [(L, (u.r,))]
    if isinstance(u, LDiv):
        yield LDIV_RIGHT, {}, [((u.l,) + L, (u.r,))]
    if isinstance(u, RDiv):
        yield RDIV_RIGHT, {}, [(L + (u.r,), (u.l,))]
    if W in rules:
        for i, j in _contiguous_blocks(len(L)):
            yield W, {"i": i, "j": j}, [(L[:i] + L[j:], R)]
    if ctx.explicit and th.oracle is not None:
        rule = LG_W if th.oracle == "lg" else ABLG_W
        for i, j in _contiguous_blocks(len(L)):
            block = L[i:j]
            if ctx.oracle_e(block):
                yield rule, {"i": i, "j": j, "certs": (Sequent(block, (E,)),)}, [(L[:i] + L[j:], R)]

    # branching rules
    for i, t in enumerate(L):
        if isinstance(t, Join) and JOIN_LEFT in rules:
            yield JOIN_LEFT, {"i": i}, [
                (L[:i] + (t.l,) + L[i + 1 :], R),
                (L[:i] + (t.r,) + L[i + 1 :], R),
            ]
    if isinstance(u, Meet) and MEET_RIGHT in rules:
        yield MEET_RIGHT, {}, [(L, (u.l,)), (L, (u.r,))]
    for i, t in enumerate(L):
        if isinstance(t, LDiv):
            for k in range(i + 1):
                yield LDIV_LEFT, {"i": i, "k": k}, [
                    (L[k:i], (t.l,)),
                    (L[:k] + (t.r,) + L[i + 1 :], R),
                ]
        if isinstance(t, RDiv):
            for j in range(i + 1, len(L) + 1):
                yield RDIV_LEFT, {"i": i, "j": j}, [
                    (L[i + 1 : j], (t.r,)),
                    (L[:i] + (t.l,) + L[j:], R),
                ]
    if isinstance(u, Fuse) and FUSE_RIGHT in rules:
        for k in range(len(L) + 1):
            yield FUSE_RIGHT, {"k": k}, [(L[:k], (u.l,)), (L[k:], (u.r,))]


def _alts_multiset(goal, ctx: _Ctx):
    L, R = goal  # L sorted; R length 1
    u = R[0]
    th = ctx.theory
    rules = allowed_rules(th)

    if len(L) == 1 and L[0] == u:
        yield ID, {}, []
    if not L and u == E:
        yield E_RIGHT, {}, []
    if not ctx.explicit and GENAX_E in rules and u == E and ctx.oracle_e(L):
        yield GENAX_E, {"certs": (Sequent(L, (E,)),)}, []
    if not ctx.explicit and GENAX_ID in rules:
        seen = set()
        for t in L:
            if t == u and t not in seen:
                seen.add(t)
                rest = _ms_remove(L, t)
                if ctx.oracle_e(rest):
                    yield GENAX_ID, {"u": t, "rest": rest}, []

    seen: set[Term] = set()
    distinct = [t for t in L if not (t in seen or seen.add(t))]

    for t in distinct:
        if t == E:
            yield E_LEFT, {}, [(_ms_remove(L, t), R)]
    if FUSE_LEFT in rules:
        for t in distinct:
            if isinstance(t, Fuse):
                yield FUSE_LEFT, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.l, t.r)), R)]
    for t in distinct:
        if isinstance(t, Meet) and MEET_LEFT_1 in rules:
            yield MEET_LEFT_1, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.l,)), R)]
            yield MEET_LEFT_2, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.r,)), R)]
    if isinstance(u, Join) and JOIN_RIGHT_1 in rules:
        yield JOIN_RIGHT_1, {}, [(L, (u.l,))]
        yield JOIN_RIGHT_2, {}, [(L, (u.r,))]
    if isinstance(u, LDiv):
        yield LDIV_RIGHT, {}, [(_sort_ms(L + (u.l,)), (u.r,))]
    if isinstance(u, RDiv):
        yield RDIV_RIGHT, {}, [(_sort_ms(L + (u.r,)), (u.l,))]
    if ctx.explicit and th.oracle is not None:
        for block in _submultisets(L):
            if block and ctx.oracle_e(block):
                yield ABLG_W, {"block": block}, [(_ms_subtract(L, block), R)]

    for t in distinct:
        if isinstance(t, Join) and JOIN_LEFT in rules:
            rest = _ms_remove(L, t)
            yield JOIN_LEFT, {"principal": t}, [
                (_sort_ms(rest + (t.l,)), R),
                (_sort_ms(rest + (t.r,)), R),
            ]
    if isinstance(u, Meet) and MEET_RIGHT in rules:
        yield MEET_RIGHT, {}, [(L, (u.l,)), (L, (u.r,))]
    for t in distinct:
        if isinstance(t, (LDiv, RDiv)):
            rule = LDIV_LEFT if isinstance(t, LDiv) else RDIV_LEFT
            s_aux = t.l if isinstance(t, LDiv) else t.r
            t_sub = t.r if isinstance(t, LDiv) else t.l
            rest = _ms_remove(L, t)
            for sub in _submultisets(rest):
                yield rule, {"principal": t, "sub": sub}, [
                    (sub, (s_aux,)),
                    (_sort_ms(_ms_subtract(rest, sub) + (t_sub,)), R),
                ]
    if isinstance(u, Fuse) and FUSE_RIGHT in rules:
        for sub in _submultisets(L):
            yield FUSE_RIGHT, {"sub": sub}, [(sub, (u.l,)), (_ms_subtract(L, sub), (u.r,))]


def _alts_ca(goal, ctx: _Ctx):
    L, R = goal  # both sorted multisets
    f = ConstF()

    if len(L) == 1 and len(R) == 1 and L[0] == R[0]:
        yield ID, {}, []
    if not L and R == (E,):
        yield E_RIGHT, {}, []
    if L == (f,) and not R:
        yield F_LEFT, {}, []

    seenL: set[Term] = set()
    distinctL = [t for t in L if not (t in seenL or seenL.add(t))]
    seenR: set[Term] = set()
    distinctR = [t for t in R if not (t in seenR or seenR.add(t))]

    for t in distinctL:
        if t == E:
            yield E_LEFT, {}, [(_ms_remove(L, t), R)]
    for t in distinctR:
        if t == f:
            yield F_RIGHT, {}, [(L, _ms_remove(R, t))]
    for t in distinctL:
        if isinstance(t, Fuse):
            yield FUSE_LEFT, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.l, t.r)), R)]
        if isinstance(t, Meet):
            yield MEET_LEFT_1, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.l,)), R)]
            yield MEET_LEFT_2, {"principal": t}, [(_sort_ms(_ms_remove(L, t) + (t.r,)), R)]
    for t in distinctR:
        if isinstance(t, Join):
            rest = _ms_remove(R, t)
            yield JOIN_RIGHT_1, {"principal": t}, [(L, _sort_ms(rest + (t.l,)))]
            yield JOIN_RIGHT_2, {"principal": t}, [(L, _sort_ms(rest + (t.r,)))]
        if isinstance(t, LDiv):
            rest = _ms_remove(R, t)
            yield ARROW_RIGHT, {"principal": t}, [(_sort_ms(L + (t.l,)), _sort_ms(rest + (t.r,)))]

    # oracle weakening: delete a non-empty pair of sub-multisets
    for dl in _submultisets(L):
        for dr in _submultisets(R):
            if not dl and not dr:
                continue
            if ctx.oracle_seq(dl, dr):
                yield ABLG_W, {"del_l": dl, "del_r": dr, "certs": (Sequent(dl, dr),)}, [
                    (_ms_subtract(L, dl), _ms_subtract(R, dr))
                ]

    for t in distinctL:
        if isinstance(t, Join):
            rest = _ms_remove(L, t)
            yield JOIN_LEFT, {"principal": t}, [
                (_sort_ms(rest + (t.l,)), R),
                (_sort_ms(rest + (t.r,)), R),
            ]
    for t in distinctR:
        if isinstance(t, Meet):
            rest = _ms_remove(R, t)
            yield MEET_RIGHT, {"principal": t}, [
                (L, _sort_ms(rest + (t.l,))),
                (L, _sort_ms(rest + (t.r,))),
            ]
        if isinstance(t, Fuse):
            restR = _ms_remove(R, t)
            for sl in _submultisets(L):
                for sr in _submultisets(restR):
                    yield FUSE_RIGHT, {"principal": t, "sub_l": sl, "sub_r": sr}, [
                        (sl, _sort_ms(sr + (t.l,))),
                        (_ms_subtract(L, sl), _sort_ms(_ms_subtract(restR, sr) + (t.r,))),
                    ]
    for t in distinctL:
        if isinstance(t, LDiv):
            restL = _ms_remove(L, t)
            for sl in _submultisets(restL):
                for sr in _submultisets(R):
                    # premise1: sl => t.l, sr     premise2: rest, t.r => R - sr
                    yield ARROW_LEFT, {"principal": t, "sub_l": sl, "sub_r": sr}, [
                        (sl, _sort_ms(sr + (t.l,))),
                        (_sort_ms(_ms_subtract(restL, sl) + (t.r,)), _ms_subtract(R, sr)),
                    ]


def _prove(goal, ctx: _Ctx, depth: int):
    memo = ctx.memo
    if goal in memo:
        return memo[goal]
    ctx.nodes += 1
    ctx.max_depth = max(ctx.max_depth, depth)
    th = ctx.theory
    if th.multiple_conclusion:
        alts = _alts_ca(goal, ctx)
    elif th.commutative:
        alts = _alts_multiset(goal, ctx)
    else:
        alts = _alts_sequence(goal, ctx)
    for rule, data, premise_goals in alts:
        premises = []
        for g in premise_goals:
            sub = _prove(g, ctx, depth + 1)
            if sub is None:
                break
            premises.append(sub)
        else:
            step = _Step(rule, data, premises)
            memo[goal] = step
            return step
    memo[goal] = None
    return None


# --- linearization ----------------------------------------------------------------


def _remove_one(seq: tuple, item: Term) -> tuple:
    i = seq.index(item)
    return _without(seq, i)


def _remove_last(seq: tuple, item: Term) -> tuple:
    i = len(seq) - 1 - seq[::-1].index(item)
    return _without(seq, i)


def _subtract_preserving(seq: tuple, sub: tuple) -> tuple:
    out = list(seq)
    for t in sub:
        out.remove(t)
    return tuple(out)


def _exchange_chain(proof: Proof, target: tuple, side: str) -> Proof:
    """Stack el/er nodes under `proof` until the given side reads `target`."""
    rule = EL if side == "left" else ER
    current = list(proof.conclusion.left if side == "left" else proof.conclusion.right)
    assert sorted(map(_term_key, current)) == sorted(map(_term_key, target)), "not a permutation"
    out = proof
    goal = list(target)
    for i in range(len(goal)):
        if current[i] == goal[i]:
            continue
        j = i + 1 + current[i + 1 :].index(goal[i])
        while j > i:
            current[j - 1], current[j] = current[j], current[j - 1]
            if side == "left":
                concl = Sequent(tuple(current), out.conclusion.right)
            else:
                concl = Sequent(out.conclusion.left, tuple(current))
            out = Proof(concl, rule, (out,))
            j -= 1
    return out


def _emit_sequence(step: _Step, goal, oracle: str | None) -> Proof:
    """Literal proof for the non-commutative modes (goals are sequences)."""
    L, R = goal
    concl = Sequent(L, R)
    certs = tuple(Certificate(oracle, s) for s in step.data.get("certs", ()))
    prem_goals = _premise_goals_sequence(step.rule, step.data, L, R)
    premises = tuple(
        _emit_sequence(sub, g, oracle) for sub, g in zip(step.premises, prem_goals)
    )
    return Proof(concl, step.rule, premises, certs)


def _premise_goals_sequence(rule, data, L, R):
    u = R[0] if R else None
    if rule in (ID, E_RIGHT, GENAX_E, GENAX_ID):
        return []
    if rule == E_LEFT:
        return [(_without(L, data["i"]), R)]
    if rule == FUSE_LEFT:
        i = data["i"]
        t = L[i]
        return [(L[:i] + (t.l, t.r) + L[i + 1 :], R)]
    if rule in (MEET_LEFT_1, MEET_LEFT_2):
        i = data["i"]
        t = L[i]
        sub = t.l if rule == MEET_LEFT_1 else t.r
        return [(L[:i] + (sub,) + L[i + 1 :], R)]
    if rule in (JOIN_RIGHT_1, JOIN_RIGHT_2):
        return [(L, (u.l if rule == JOIN_RIGHT_1 else u.r,))]
    if rule == LDIV_RIGHT:
        return [((u.l,) + L, (u.r,))]
    if rule == RDIV_RIGHT:
        return [(L + (u.r,), (u.l,))]
    if rule in (W, LG_W, ABLG_W):
        i, j = data["i"], data["j"]
        return [(L[:i] + L[j:], R)]
    if rule == JOIN_LEFT:
        i = data["i"]
        t = L[i]
        return [(L[:i] + (t.l,) + L[i + 1 :], R), (L[:i] + (t.r,) + L[i + 1 :], R)]
    if rule == MEET_RIGHT:
        return [(L, (u.l,)), (L, (u.r,))]
    if rule == LDIV_LEFT:
        i, k = data["i"], data["k"]
        t = L[i]
        return [(L[k:i], (t.l,)), (L[:k] + (t.r,) + L[i + 1 :], R)]
    if rule == RDIV_LEFT:
        i, j = data["i"], data["j"]
        t = L[i]
        return [(L[i + 1 : j], (t.r,)), (L[:i] + (t.l,) + L[j:], R)]
    if rule == FUSE_RIGHT:
        k = data["k"]
        return [(L[:k], (u.l,)), (L[k:], (u.r,))]
    raise AssertionError(f"unexpected rule in sequence emission: {rule}")


def _emit_multiset(step: _Step, target_left: tuple, target_right: tuple) -> Proof:
    """Literal proof for the commutative single-conclusion modes."""
    rule, data = step.rule, step.data
    R = target_right
    u = R[0]

    if rule in (ID, E_RIGHT):
        return Proof(Sequent(target_left, R), rule)
    if rule == GENAX_E:
        cert = Certificate("ablg", Sequent(target_left, (E,)))
        return Proof(Sequent(target_left, R), rule, (), (cert,))
    if rule == GENAX_ID:
        t = data["u"]
        rest = _remove_last(target_left, t)
        concl_left = rest + (t,)
        certs = (
            Certificate("ablg", Sequent(rest, (E,))),
            Certificate("ablg", Sequent((), (E,))),
        )
        node = Proof(Sequent(concl_left, R), rule, (), certs)
        return _exchange_chain(node, target_left, "left")
    if rule == E_LEFT:
        sub_target = _remove_one(target_left, E)
        p = _emit_multiset(step.premises[0], sub_target, R)
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule == FUSE_LEFT:
        t = data["principal"]
        i = target_left.index(t)
        sub_target = target_left[:i] + (t.l, t.r) + target_left[i + 1 :]
        p = _emit_multiset(step.premises[0], sub_target, R)
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule in (MEET_LEFT_1, MEET_LEFT_2):
        t = data["principal"]
        i = target_left.index(t)
        sub = t.l if rule == MEET_LEFT_1 else t.r
        p = _emit_multiset(step.premises[0], target_left[:i] + (sub,) + target_left[i + 1 :], R)
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule in (JOIN_RIGHT_1, JOIN_RIGHT_2):
        sub = u.l if rule == JOIN_RIGHT_1 else u.r
        p = _emit_multiset(step.premises[0], target_left, (sub,))
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule == LDIV_RIGHT:
        p = _emit_multiset(step.premises[0], (u.l,) + target_left, (u.r,))
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule == RDIV_RIGHT:
        p = _emit_multiset(step.premises[0], target_left + (u.r,), (u.l,))
        return Proof(Sequent(target_left, R), rule, (p,))
    if rule == ABLG_W:
        block = data["block"]
        rest_target = _subtract_preserving(target_left, block)
        p = _emit_multiset(step.premises[0], rest_target, R)
        concl_left = rest_target + block
        cert = Certificate("ablg", Sequent(block, (E,)))
        node = Proof(Sequent(concl_left, R), rule, (p,), (cert,))
        return _exchange_chain(node, target_left, "left")
    if rule == JOIN_LEFT:
        t = data["principal"]
        i = target_left.index(t)
        p1 = _emit_multiset(step.premises[0], target_left[:i] + (t.l,) + target_left[i + 1 :], R)
        p2 = _emit_multiset(step.premises[1], target_left[:i] + (t.r,) + target_left[i + 1 :], R)
        return Proof(Sequent(target_left, R), rule, (p1, p2))
    if rule == MEET_RIGHT:
        p1 = _emit_multiset(step.premises[0], target_left, (u.l,))
        p2 = _emit_multiset(step.premises[1], target_left, (u.r,))
        return Proof(Sequent(target_left, R), rule, (p1, p2))
    if rule in (LDIV_LEFT, RDIV_LEFT):
        t = data["principal"]
        sub = data["sub"]
        rest = _subtract_preserving(_remove_one(target_left, t), sub)
        sub_sorted = _sort_ms(sub)
        s_aux = t.l if rule == LDIV_LEFT else t.r
        t_sub = t.r if rule == LDIV_LEFT else t.l
        p1 = _emit_multiset(step.premises[0], sub_sorted, (s_aux,))
        p2 = _emit_multiset(step.premises[1], (t_sub,) + rest, R)
        if rule == LDIV_LEFT:
            concl_left = sub_sorted + (t,) + rest  # G1 empty, G2 = sub, G3 = rest
        else:
            concl_left = (t,) + sub_sorted + rest  # G1 empty, G2 = sub, G3 = rest
        node = Proof(Sequent(concl_left, R), rule, (p1, p2))
        return _exchange_chain(node, target_left, "left")
    if rule == FUSE_RIGHT:
        sub = data["sub"]
        sub_sorted = _sort_ms(sub)
        rest = _subtract_preserving(target_left, sub)
        p1 = _emit_multiset(step.premises[0], sub_sorted, (u.l,))
        p2 = _emit_multiset(step.premises[1], rest, (u.r,))
        node = Proof(Sequent(sub_sorted + rest, R), rule, (p1, p2))
        return _exchange_chain(node, target_left, "left")
    raise AssertionError(f"unexpected rule in multiset emission: {rule}")


def _emit_ca(step: _Step, target_left: tuple, target_right: tuple) -> Proof:
    rule, data = step.rule, step.data
    f = ConstF()

    if rule in (ID, E_RIGHT, F_LEFT):
        return Proof(Sequent(target_left, target_right), rule)
    if rule == E_LEFT:
        p = _emit_ca(step.premises[0], _remove_one(target_left, E), target_right)
        return Proof(Sequent(target_left, target_right), rule, (p,))
    if rule == F_RIGHT:
        p = _emit_ca(step.premises[0], target_left, _remove_one(target_right, f))
        return Proof(Sequent(target_left, target_right), rule, (p,))
    if rule == FUSE_LEFT:
        t = data["principal"]
        i = target_left.index(t)
        p = _emit_ca(step.premises[0], target_left[:i] + (t.l, t.r) + target_left[i + 1 :], target_right)
        return Proof(Sequent(target_left, target_right), rule, (p,))
    if rule in (MEET_LEFT_1, MEET_LEFT_2):
        t = data["principal"]
        i = target_left.index(t)
        sub = t.l if rule == MEET_LEFT_1 else t.r
        p = _emit_ca(step.premises[0], target_left[:i] + (sub,) + target_left[i + 1 :], target_right)
        return Proof(Sequent(target_left, target_right), rule, (p,))
    if rule in (JOIN_RIGHT_1, JOIN_RIGHT_2):
        t = data["principal"]
        i = target_right.index(t)
        sub = t.l if rule == JOIN_RIGHT_1 else t.r
        p = _emit_ca(step.premises[0], target_left, target_right[:i] + (sub,) + target_right[i + 1 :])
        return Proof(Sequent(target_left, target_right), rule, (p,))
    if rule == ARROW_RIGHT:
        t = data["principal"]
        rest_r = _remove_last(target_right, t)
        p = _emit_ca(step.premises[0], target_left + (t.l,), (t.r,) + rest_r)
        node = Proof(Sequent(target_left, (t,) + rest_r), rule, (p,))
        return _exchange_chain(node, target_right, "right")
    if rule == ABLG_W:
        dl, dr = data["del_l"], data["del_r"]
        rest_l = _subtract_preserving(target_left, dl)
        rest_r = _subtract_preserving(target_right, dr)
        dl_sorted, dr_sorted = _sort_ms(dl), _sort_ms(dr)
        p = _emit_ca(step.premises[0], rest_l, rest_r)
        cert = Certificate("ablg", Sequent(dl_sorted, dr_sorted))
        node = Proof(Sequent(rest_l + dl_sorted, rest_r + dr_sorted), rule, (p,), (cert,))
        node = _exchange_chain(node, target_left, "left")
        return _exchange_chain(node, target_right, "right")
    if rule == JOIN_LEFT:
        t = data["principal"]
        i = target_left.index(t)
        p1 = _emit_ca(step.premises[0], target_left[:i] + (t.l,) + target_left[i + 1 :], target_right)
        p2 = _emit_ca(step.premises[1], target_left[:i] + (t.r,) + target_left[i + 1 :], target_right)
        return Proof(Sequent(target_left, target_right), rule, (p1, p2))
    if rule == MEET_RIGHT:
        t = data["principal"]
        i = target_right.index(t)
        p1 = _emit_ca(step.premises[0], target_left, target_right[:i] + (t.l,) + target_right[i + 1 :])
        p2 = _emit_ca(step.premises[1], target_left, target_right[:i] + (t.r,) + target_right[i + 1 :])
        return Proof(Sequent(target_left, target_right), rule, (p1, p2))
    if rule == FUSE_RIGHT:
        t = data["principal"]
        sl, sr = data["sub_l"], data["sub_r"]
        sl_s, sr_s = _sort_ms(sl), _sort_ms(sr)
        rest_l = _subtract_preserving(target_left, sl)
        rest_r = _subtract_preserving(_remove_one(target_right, t), sr)
        p1 = _emit_ca(step.premises[0], sl_s, (t.l,) + sr_s)
        p2 = _emit_ca(step.premises[1], rest_l, (t.r,) + rest_r)
        node = Proof(Sequent(sl_s + rest_l, (t,) + sr_s + rest_r), rule, (p1, p2))
        node = _exchange_chain(node, target_left, "left")
        return _exchange_chain(node, target_right, "right")
    if rule == ARROW_LEFT:
        t = data["principal"]
        sl, sr = data["sub_l"], data["sub_r"]
        sl_s, sr_s = _sort_ms(sl), _sort_ms(sr)
        rest_l = _subtract_preserving(_remove_one(target_left, t), sl)
        rest_r = _subtract_preserving(target_right, sr)
        p1 = _emit_ca(step.premises[0], sl_s, (t.l,) + sr_s)
        p2 = _emit_ca(step.premises[1], (t.r,) + rest_l, rest_r)
        # G1 empty: conclusion left = t, G2, G3 ; right = D1, D2
        node = Proof(Sequent((t,) + sl_s + rest_l, rest_r + sr_s), rule, (p1, p2))
        node = _exchange_chain(node, target_left, "left")
        return _exchange_chain(node, target_right, "right")
    raise AssertionError(f"unexpected rule in ca emission: {rule}")


# --- entry points ------------------------------------------------------------------


def _run_search(s: Sequent, theory: Theory, explicit: bool) -> SearchOutcome:
    check_sequent_for_theory(s, theory)
    s = Sequent(
        tuple(normalize_for_theory(t, theory) for t in s.left),
        tuple(normalize_for_theory(t, theory) for t in s.right),
    )
    memo = _MEMO.setdefault((theory, explicit), {})
    ctx = _Ctx(theory, explicit, memo)
    if theory.multiple_conclusion:
        goal = (_sort_ms(s.left), _sort_ms(s.right))
    elif theory.commutative:
        goal = (_sort_ms(s.left), s.right)
    else:
        goal = (s.left, s.right)
    step = _prove(goal, ctx, 0)
    if step is None:
        return SearchOutcome(False, None, ctx.nodes, ctx.max_depth)
    if theory.multiple_conclusion:
        proof = _emit_ca(step, s.left, s.right)
    elif theory.commutative:
        proof = _emit_multiset(step, s.left, s.right)
    else:
        proof = _emit_sequence(step, goal, theory.oracle)
    return SearchOutcome(True, proof, ctx.nodes, ctx.max_depth)


def search(s: Sequent, theory: Theory) -> SearchOutcome:
    """Cut-free backward search; oracle theories use the generalized axioms."""
    return _run_search(s, theory, explicit=False)


def search_lgw_explicit(s: Sequent, theory: Theory) -> SearchOutcome:
    """Backward search applying the oracle weakening rule itself (block
    deletion) with plain identity/unit axioms; the generalized-axiom
    formulation is validated against this one."""
    if theory.multiple_conclusion or theory.oracle is None:
        raise ValueError("explicit-weakening search applies to the oracle single-conclusion theories")
    return _run_search(s, theory, explicit=True)


def decide_equation(s: Term, t: Term, theory: Theory) -> bool:
    """Equational validity: both sequents s => t and t => s derivable."""
    s = normalize_for_theory(s, theory)
    t = normalize_for_theory(t, theory)
    a = search(Sequent((s,), (t,)), theory)
    if not a.derivable:
        return False
    return search(Sequent((t,), (s,)), theory).derivable


def make_cut(p1: Proof, p2: Proof, pos: int) -> Proof:
    """Assemble a literal cut node from a proof of G2 => s (first premise)
    and a proof whose left side has s at index pos (second premise)."""
    s = p1.conclusion.right[0]
    d1 = p1.conclusion.right[1:]
    L2 = p2.conclusion.left
    if L2[pos] != s:
        raise ValueError("cut formula mismatch")
    concl = Sequent(L2[:pos] + p1.conclusion.left + L2[pos + 1 :], d1 + p2.conclusion.right)
    return Proof(concl, CUT, (p1, p2))

