"""Term language for residuated-lattice reasoning.

Terms are built from the eight core constructors (variables, the unit e,
the extra constant f, meet, join, fusion, and the two residuals).  Derived
connectives (~t, -t, s -> t, s + t) are expanded at parse time and never
stored, so every downstream consumer sees only the core constructors.

ASCII grammar, tightest-binding first:

    ~ -        prefix (~t = t \\ e, -t = t \\ f)
    *          fusion, left-associative
    \\ /       residuals, non-associative (chains need parentheses)
    ->         arrow (commutative theories only), non-associative
    /\\        meet, left-associative
    \\/        join, left-associative
    +          plus (-a -> b; pointed commutative only), left-associative

Sequents are written  t1, t2, ... => u  with a comma-separated right side in
multiple-conclusion mode; either side may be empty there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache


class Term:
    """Base class for term AST nodes.  Instances are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class ConstE(Term):
    pass


@dataclass(frozen=True)
class ConstF(Term):
    pass


@dataclass(frozen=True)
class Meet(Term):
    l: Term
    r: Term


@dataclass(frozen=True)
class Join(Term):
    l: Term
    r: Term


@dataclass(frozen=True)
class Fuse(Term):
    l: Term
    r: Term


@dataclass(frozen=True)
class LDiv(Term):
    """Left residual l \\ r."""

    l: Term
    r: Term


@dataclass(frozen=True)
class RDiv(Term):
    """Right residual l / r."""

    l: Term
    r: Term


E = ConstE()
F = ConstF()

_BINOPS = (Meet, Join, Fuse, LDiv, RDiv)


class Theory(enum.Enum):
    """The nine supported theory modes.

    The theory fixes the signature, the sequent shape, the structural rules,
    and which validity oracle (if any) backs the weakening side-condition.
    """

    RL = "rl"
    IRL = "irl"
    ICRL = "icrl"
    CICRL = "cicrl"
    SIRM = "sirm"
    PSEUDO_BCI = "pseudobci"
    SIRCOM = "sircom"
    BCI = "bci"
    CA = "ca"

    @property
    def pointed(self) -> bool:
        return self is Theory.CA

    @property
    def commutative(self) -> bool:
        return self in (Theory.CICRL, Theory.SIRCOM, Theory.BCI, Theory.CA)

    @property
    def multiple_conclusion(self) -> bool:
        return self is Theory.CA

    @property
    def oracle(self) -> str | None:
        """Name of the validity oracle backing the weakening rule."""
        if self in (Theory.ICRL, Theory.SIRM, Theory.PSEUDO_BCI):
            return "lg"
        if self in (Theory.CICRL, Theory.SIRCOM, Theory.BCI, Theory.CA):
            return "ablg"
        return None

    @property
    def has_weakening(self) -> bool:
        """Unrestricted weakening (integral mode)."""
        return self is Theory.IRL

    @property
    def has_lattice_ops(self) -> bool:
        return self in (Theory.RL, Theory.IRL, Theory.ICRL, Theory.CICRL, Theory.CA)

    @property
    def has_fuse(self) -> bool:
        return self not in (Theory.PSEUDO_BCI, Theory.BCI)

    @property
    def is_m_sequent(self) -> bool:
        """Restricted to monoid/residual terms (no lattice connectives)."""
        return self in (Theory.SIRM, Theory.PSEUDO_BCI, Theory.SIRCOM, Theory.BCI)


def theory_from_name(name: str) -> Theory:
    try:
        return Theory(name.strip().lower())
    except ValueError:
        valid = ", ".join(t.value for t in Theory)
        raise ValueError(f"unknown theory {name!r} (expected one of: {valid})") from None


@dataclass(frozen=True)
class Sequent:
    """left |- right, both tuples of terms.

    In single-conclusion modes the right side has length exactly one; the
    multiple-conclusion mode allows any length on either side.
    """

    left: tuple[Term, ...]
    right: tuple[Term, ...]

    def __post_init__(self):
        assert all(isinstance(t, Term) for t in self.left)
        assert all(isinstance(t, Term) for t in self.right)


class ParseError(ValueError):
    """Syntax or signature error, with the offending position in the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --- lexer ----------------------------------------------------------------

_TWO_CHAR = {"/\\": "MEET", "\\/": "JOIN", "->": "ARROW", "=>": "SEQ", "<=": "LEQ"}
_ONE_CHAR = {
    "*": "FUSE",
    "\\": "LDIV",
    "/": "RDIV",
    "~": "TILDE",
    "-": "NEG",
    "+": "PLUS",
    "(": "LPAR",
    ")": "RPAR",
    ",": "COMMA",
}


def _lex(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            toks.append((_TWO_CHAR[two], two, i))
            i += 2
            continue
        if c in _ONE_CHAR:
            toks.append((_ONE_CHAR[c], c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(("IDENT", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("EOF", "", n))
    return toks


# --- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, theory: Theory):
        self.toks = _lex(text)
        self.pos = 0
        self.theory = theory

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def fail(self, message: str):
        raise ParseError(message, self.peek()[2])

    def require_lattice(self):
        if not self.theory.has_lattice_ops:
            self.fail(f"lattice connective not in the signature of theory {self.theory.value}")

    # one method per precedence level, loosest first

    def term(self) -> Term:
        return self.plus()

    def plus(self) -> Term:
        t = self.join()
        while self.peek()[0] == "PLUS":
            at = self.next()[2]
            if not (self.theory.pointed and self.theory.commutative):
                raise ParseError(f"'+' not available in theory {self.theory.value}", at)
            # a + b  :=  -a -> b  =  (a \ f) \ b
            t = LDiv(LDiv(t, F), self.join())
        return t

    def join(self) -> Term:
        t = self.meet()
        while self.peek()[0] == "JOIN":
            self.next()
            self.require_lattice()
            t = Join(t, self.meet())
        return t

    def meet(self) -> Term:
        t = self.arrow()
        while self.peek()[0] == "MEET":
            self.next()
            self.require_lattice()
            t = Meet(t, self.arrow())
        return t

    def arrow(self) -> Term:
        t = self.resid()
        if self.peek()[0] == "ARROW":
            at = self.next()[2]
            if not self.theory.commutative:
                raise ParseError(
                    f"'->' is only available in commutative theories, not {self.theory.value}", at
                )
            t = LDiv(t, self.resid())
            if self.peek()[0] == "ARROW":
                self.fail("'->' is non-associative; parenthesize chained arrows")
        return t

    def resid(self) -> Term:
        t = self.fuse()
        kind = self.peek()[0]
        if kind in ("LDIV", "RDIV"):
            self.next()
            rhs = self.fuse()
            t = LDiv(t, rhs) if kind == "LDIV" else RDiv(t, rhs)
            if self.peek()[0] in ("LDIV", "RDIV"):
                self.fail("residuals are non-associative; parenthesize chained \\ or /")
        return t

    def fuse(self) -> Term:
        t = self.prefix()
        while self.peek()[0] == "FUSE":
            at = self.next()[2]
            if not self.theory.has_fuse:
                raise ParseError(f"'*' not in the signature of theory {self.theory.value}", at)
            t = Fuse(t, self.prefix())
        return t

    def prefix(self) -> Term:
        kind, _, at = self.peek()
        if kind == "TILDE":
            self.next()
            return LDiv(self.prefix(), E)
        if kind == "NEG":
            self.next()
            if not self.theory.pointed:
                raise ParseError(f"'-' requires the pointed signature (theory ca)", at)
            return LDiv(self.prefix(), F)
        return self.atom()

    def atom(self) -> Term:
        kind, text, at = self.next()
        if kind == "LPAR":
            t = self.term()
            self.expect("RPAR")
            return t
        if kind == "IDENT":
            if text == "e":
                return E
            if text == "f":
                if not self.theory.pointed:
                    raise ParseError(f"constant f not allowed in theory {self.theory.value}", at)
                return F
            return Var(text)
        raise ParseError(f"expected a term, found {text!r}" if text else "unexpected end of input", at)


def _check_m_sequent(t: Term, theory: Theory):
    if not theory.is_m_sequent:
        return
    for sub in subterms(t):
        if isinstance(sub, (Meet, Join)):
            raise ParseError(
                f"lattice connective not in the signature of theory {theory.value}", 0
            )
        if isinstance(sub, Fuse) and not theory.has_fuse:
            raise ParseError(f"'*' not in the signature of theory {theory.value}", 0)


def parse_term(text: str, theory: Theory = Theory.ICRL) -> Term:
    """Parse a term, expanding derived connectives to the core constructors."""
    p = _Parser(text, theory)
    t = p.term()
    p.expect("EOF")
    _check_m_sequent(t, theory)
    return normalize_for_theory(t, theory)


def parse_sequent(text: str, theory: Theory = Theory.ICRL) -> Sequent:
    """Parse 't1, ..., tn => u' (or a comma-separated right side in ca mode)."""
    p = _Parser(text, theory)

    def side() -> list[Term]:
        terms = []
        if p.peek()[0] in ("SEQ", "EOF"):
            return terms
        terms.append(p.term())
        while p.peek()[0] == "COMMA":
            p.next()
            terms.append(p.term())
        return terms

    left = side()
    p.expect("SEQ")
    right = side()
    p.expect("EOF")
    if not theory.multiple_conclusion and len(right) != 1:
        raise ParseError(
            f"theory {theory.value} requires exactly one term on the right, found {len(right)}", 0
        )
    for t in left + right:
        _check_m_sequent(t, theory)
    return Sequent(
        tuple(normalize_for_theory(t, theory) for t in left),
        tuple(normalize_for_theory(t, theory) for t in right),
    )


def parse_leq(text: str, theory: Theory = Theory.ICRL) -> tuple[Term, Term]:
    """Parse an inequation 's <= t'."""
    p = _Parser(text, theory)
    s = p.term()
    p.expect("LEQ")
    t = p.term()
    p.expect("EOF")
    return normalize_for_theory(s, theory), normalize_for_theory(t, theory)


# --- printing -------------------------------------------------------------

_LEVEL_JOIN = 1
_LEVEL_MEET = 2
_LEVEL_RESID = 4
_LEVEL_FUSE = 5
_LEVEL_ATOM = 7


def _level(t: Term) -> int:
    if isinstance(t, Join):
        return _LEVEL_JOIN
    if isinstance(t, Meet):
        return _LEVEL_MEET
    if isinstance(t, (LDiv, RDiv)):
        return _LEVEL_RESID
    if isinstance(t, Fuse):
        return _LEVEL_FUSE
    return _LEVEL_ATOM


@lru_cache(maxsize=65536)
def print_term(t: Term) -> str:
    """Render a term with minimal parentheses; parse_term round-trips it."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, ConstE):
        return "e"
    if isinstance(t, ConstF):
        return "f"
    op = {Meet: "/\\", Join: "\\/", Fuse: "*", LDiv: "\\", RDiv: "/"}[type(t)]
    lvl = _level(t)
    non_assoc = isinstance(t, (LDiv, RDiv))
    ls = print_term(t.l)
    rs = print_term(t.r)
    if _level(t.l) < lvl or (non_assoc and _level(t.l) == lvl):
        ls = f"({ls})"
    if _level(t.r) <= lvl:
        rs = f"({rs})"
    return f"{ls} {op} {rs}"


def print_sequent(s: Sequent) -> str:
    left = ", ".join(print_term(t) for t in s.left)
    right = ", ".join(print_term(t) for t in s.right)
    return f"{left} => {right}" if left else f"=> {right}"


# --- measures and translations ---------------------------------------------


def complexity(t: Term) -> int:
    """Number of connective, constant, and variable occurrences."""
    if isinstance(t, _BINOPS):
        return 1 + complexity(t.l) + complexity(t.r)
    return 1


def sequent_complexity(s: Sequent) -> int:
    return sum(complexity(t) for t in s.left) + sum(complexity(t) for t in s.right)


def subterms(t: Term):
    yield t
    if isinstance(t, _BINOPS):
        yield from subterms(t.l)
        yield from subterms(t.r)


def variables(t: Term) -> set[str]:
    return {sub.name for sub in subterms(t) if isinstance(sub, Var)}


def sequent_variables(s: Sequent) -> set[str]:
    out: set[str] = set()
    for t in s.left + s.right:
        out |= variables(t)
    return out


def is_pointed(t: Term) -> bool:
    return any(isinstance(sub, ConstF) for sub in subterms(t))


def neg_translation(t: Term) -> Term:
    """The negative-cone translation: guards every variable with a meet with e
    and clips both residuals by e.  Defined for f-free terms only."""
    if isinstance(t, ConstE):
        return E
    if isinstance(t, Var):
        return Meet(t, E)
    if isinstance(t, ConstF):
        raise ValueError("negative-cone translation is defined for f-free terms only")
    l, r = neg_translation(t.l), neg_translation(t.r)
    if isinstance(t, (Meet, Join, Fuse)):
        return type(t)(l, r)
    return Meet(type(t)(l, r), E)


def double_neg(t: Term) -> Term:
    """(t \\ e) \\ e."""
    return LDiv(LDiv(t, E), E)


def subst_f_to_e(t: Term) -> Term:
    if isinstance(t, ConstF):
        return E
    if isinstance(t, _BINOPS):
        return type(t)(subst_f_to_e(t.l), subst_f_to_e(t.r))
    return t


def normalize_for_theory(t: Term, theory: Theory) -> Term:
    """In the ca mode both residuals collapse to the arrow; store l \\ r only."""
    if theory is not Theory.CA:
        return t
    if isinstance(t, RDiv):
        return LDiv(normalize_for_theory(t.r, theory), normalize_for_theory(t.l, theory))
    if isinstance(t, _BINOPS):
        return type(t)(normalize_for_theory(t.l, theory), normalize_for_theory(t.r, theory))
    return t


def product_term(terms) -> Term:
    """Left-to-right fusion of a sequence of terms; the empty product is e."""
    terms = list(terms)
    if not terms:
        return E
    out = terms[0]
    for t in terms[1:]:
        out = Fuse(out, t)
    return out


def check_term_for_theory(t: Term, theory: Theory):
    """Raise ValueError when t uses connectives outside the theory's signature."""
    for sub in subterms(t):
        if isinstance(sub, ConstF) and not theory.pointed:
            raise ValueError(f"constant f not allowed in theory {theory.value}")
        if isinstance(sub, (Meet, Join)) and not theory.has_lattice_ops:
            raise ValueError(f"lattice connectives not allowed in theory {theory.value}")
        if isinstance(sub, Fuse) and not theory.has_fuse:
            raise ValueError(f"fusion not allowed in theory {theory.value}")


def check_sequent_for_theory(s: Sequent, theory: Theory):
    if not theory.multiple_conclusion and len(s.right) != 1:
        raise ValueError(
            f"theory {theory.value} requires single-conclusion sequents, got {len(s.right)} right terms"
        )
    for t in s.left + s.right:
        check_term_for_theory(t, theory)
