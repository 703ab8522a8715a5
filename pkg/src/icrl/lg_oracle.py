"""Validity of t <= e over all lattice-ordered groups.

The decision chain: rewrite the term into a join-of-meets of freely reduced
group words (residuals become inverses, fusion becomes concatenation, the
lattice operations are distributed out), then decide each meet block by the
subsemigroup criterion: a meet of group words is <= e in every l-group
exactly when the identity lies in the subsemigroup its words generate.

That criterion is imported from the ordered-group literature and quarantined
behind this module: membership of the identity in a finitely generated
subsemigroup of a free group is decided by rational-subset automaton
saturation, and is differentially tested against a brute-force closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .terms import ConstE, ConstF, Fuse, Join, LDiv, Meet, RDiv, Sequent, Term, Var, product_term

# A group word is a freely reduced tuple of (variable, sign) letters;
# the empty tuple is the group identity.
Letter = tuple[str, int]
GroupWord = tuple[Letter, ...]

DEFAULT_WORD_CAP = 100_000


class GnfSizeError(RuntimeError):
    """Distribution to join-of-meets form exceeded the configured word cap."""


@dataclass(frozen=True)
class GroupNormalForm:
    """Join of meets of group words: joinands outer, meetands inner."""

    meetands_by_joinand: tuple[tuple[GroupWord, ...], ...]

    def __post_init__(self):
        assert self.meetands_by_joinand, "a normal form has at least one joinand"
        assert all(block for block in self.meetands_by_joinand)


def reduce_word(letters) -> GroupWord:
    """Freely reduce a letter sequence with a cancellation stack."""
    stack: list[Letter] = []
    for v, s in letters:
        if stack and stack[-1][0] == v and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((v, s))
    return tuple(stack)


def concat_words(w1: GroupWord, w2: GroupWord) -> GroupWord:
    stack = list(w1)
    for v, s in w2:
        if stack and stack[-1][0] == v and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((v, s))
    return tuple(stack)


def invert_word(w: GroupWord) -> GroupWord:
    return tuple((v, -s) for v, s in reversed(w))


# Internally a join-of-meets is a frozenset of frozensets of words.
_Jom = frozenset


def _jom_size(j) -> int:
    return sum(len(block) for block in j)


def _capped(j, cap: int):
    if _jom_size(j) > cap:
        raise GnfSizeError(f"normal form exceeded the word cap ({cap})")
    return j


def _absorb(jom):
    """Drop meet blocks that contain another block: the bigger meet lies
    below the smaller one, so the join absorbs it."""
    blocks = sorted(jom, key=len)
    kept: list = []
    for m in blocks:
        if not any(n <= m for n in kept):
            kept.append(m)
    return frozenset(kept)


def _jom_meet(a, b, cap):
    return _capped(_absorb(frozenset(m | n for m in a for n in b)), cap)


def _jom_join(a, b, cap):
    return _capped(_absorb(a | b), cap)


def _jom_fuse(a, b, cap):
    out = set()
    for m in a:
        for n in b:
            out.add(frozenset(concat_words(w, v) for w in m for v in n))
    return _capped(_absorb(frozenset(out)), cap)


def _jom_invert(a, cap):
    # (V_i /\_j w_ij)^-1 = /\_i V_j w_ij^-1, distributed back to join-of-meets
    # incrementally: deduplication and absorption keep the frontier small
    out = {frozenset()}
    for m in a:
        inverted = sorted({invert_word(w) for w in m})
        out = _absorb({blk | {w} for blk in out for w in inverted})
        _capped(out, cap)
    return frozenset(out)


def _to_jom(t: Term, cap: int):
    if isinstance(t, Var):
        return frozenset({frozenset({((t.name, 1),)})})
    if isinstance(t, ConstE):
        return frozenset({frozenset({()})})
    if isinstance(t, ConstF):
        raise ValueError("pointed term: replace f by e before calling the l-group oracle")
    if isinstance(t, Meet):
        return _jom_meet(_to_jom(t.l, cap), _to_jom(t.r, cap), cap)
    if isinstance(t, Join):
        return _jom_join(_to_jom(t.l, cap), _to_jom(t.r, cap), cap)
    if isinstance(t, Fuse):
        return _jom_fuse(_to_jom(t.l, cap), _to_jom(t.r, cap), cap)
    if isinstance(t, LDiv):
        return _jom_fuse(_jom_invert(_to_jom(t.l, cap), cap), _to_jom(t.r, cap), cap)
    if isinstance(t, RDiv):
        return _jom_fuse(_to_jom(t.l, cap), _jom_invert(_to_jom(t.r, cap), cap), cap)
    raise TypeError(f"not a term: {t!r}")


def to_gnf(t: Term, cap: int = DEFAULT_WORD_CAP) -> GroupNormalForm:
    """Join-of-meets of group words equal to t in every l-group."""
    jom = _to_jom(t, cap)
    return GroupNormalForm(tuple(sorted(tuple(sorted(m)) for m in jom)))


# --- rational-subset automaton ----------------------------------------------


class WordAutomaton:
    """Finite automaton over signed letters with epsilon edges.

    Built to accept every non-empty concatenation of the generator words and
    then saturated: whenever a state reaches another by a letter, epsilon
    steps, and that letter's inverse, an epsilon edge is added.  After
    saturation the empty word is accepted exactly when some non-empty product
    of generators freely reduces to the identity.
    """

    def __init__(self, generators):
        self.letter_edges: list[tuple[int, Letter, int]] = []
        self.eps: dict[int, set[int]] = {}
        self.start = 0
        self.final = 1
        next_state = 2
        for word in generators:
            prev = self.start
            for i, letter in enumerate(word):
                dst = self.final if i == len(word) - 1 else next_state
                if dst == next_state:
                    next_state += 1
                self.letter_edges.append((prev, letter, dst))
                prev = dst
            if not word:
                self._add_eps(self.start, self.final)
        self._add_eps(self.final, self.start)  # loop back for further generators
        self.num_states = next_state

    def _add_eps(self, p: int, q: int) -> bool:
        dsts = self.eps.setdefault(p, set())
        if q in dsts:
            return False
        dsts.add(q)
        return True

    def eps_closure(self) -> dict[int, set[int]]:
        closure = {}
        for s in range(self.num_states):
            reach = {s}
            stack = [s]
            while stack:
                q = stack.pop()
                for r in self.eps.get(q, ()):
                    if r not in reach:
                        reach.add(r)
                        stack.append(r)
            closure[s] = reach
        return closure

    def saturate(self):
        """Add epsilon edges p -> q whenever p -a-> r =eps=> s -a^-1-> q."""
        by_src: dict[tuple[int, Letter], set[int]] = {}
        for p, a, q in self.letter_edges:
            by_src.setdefault((p, a), set()).add(q)
        changed = True
        while changed:
            changed = False
            closure = self.eps_closure()
            for p, a, r in self.letter_edges:
                inv = (a[0], -a[1])
                for s in closure[r]:
                    for q in by_src.get((s, inv), ()):
                        if self._add_eps(p, q):
                            changed = True

    def accepts_empty(self) -> bool:
        return self.final in self.eps_closure()[self.start]


@lru_cache(maxsize=65536)
def semigroup_contains_identity(gens: frozenset[GroupWord]) -> bool:
    """True iff some non-empty product of the generators reduces to e."""
    if not gens:
        raise ValueError("generator set must be non-empty")
    if () in gens:
        return True
    auto = WordAutomaton(sorted(gens))
    auto.saturate()
    return auto.accepts_empty()


def bfs_identity_oracle(gens, depth: int) -> bool:
    """Sound but incomplete closure check: products of at most `depth` generators.

    Exists only as an independent cross-check for the automaton answer.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    gens = set(gens)
    frontier = set(gens)
    seen = set(frontier)
    for _ in range(depth - 1):
        if () in frontier:
            return True
        frontier = {concat_words(w, g) for w in frontier for g in gens} - seen
        seen |= frontier
    return () in seen


# --- validity ----------------------------------------------------------------


@lru_cache(maxsize=65536)
def lg_valid_leq_e(t: Term, cap: int = DEFAULT_WORD_CAP) -> bool:
    """True iff t <= e holds in every lattice-ordered group."""
    jom = _to_jom(t, cap)
    return all(semigroup_contains_identity(frozenset(block)) for block in jom)


def lg_valid_sequent(s: Sequent, cap: int = DEFAULT_WORD_CAP) -> bool:
    """Sequent validity over l-groups: product(left) <= right."""
    if len(s.right) != 1:
        raise ValueError("the l-group oracle takes single-conclusion sequents")
    u = s.right[0]
    t = product_term(s.left)
    if not isinstance(u, ConstE):
        t = Fuse(t, LDiv(u, ConstE()))
    return lg_valid_leq_e(t, cap)


def clear_caches():
    semigroup_contains_identity.cache_clear()
    lg_valid_leq_e.cache_clear()
