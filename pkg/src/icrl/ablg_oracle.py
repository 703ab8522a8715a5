r"""Validity over all abelian lattice-ordered groups.

Terms abelianize to joins of meets of integer exponent vectors; a meet block
/\_j c_j <= 0 is valid over the rationals exactly when the strict system
{<c_j, x> > 0 for all j} is infeasible.  Rational validity coincides with
abelian l-group validity for these homogeneous inequations, and integer
points suffice for refutations (scale a rational solution).

Infeasibility is decided by exact Fourier-Motzkin elimination (integer rows,
gcd-normalized).  As an independent cross-check, `gordan_infeasible` searches
for a Gordan certificate (a non-zero non-negative combination of the rows
summing to the zero form) with an exact phase-1 simplex.  No floating point
anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import lg_oracle
from .terms import (
    ConstE,
    ConstF,
    Fuse,
    Join,
    LDiv,
    Meet,
    RDiv,
    Sequent,
    Term,
    Var,
    product_term,
    sequent_variables,
    subst_f_to_e,
    variables,
)


@dataclass(frozen=True, order=True)
class LinearForm:
    """Integer exponent vector; zero coefficients are omitted."""

    coeffs: tuple[tuple[str, int], ...]

    @classmethod
    def from_dict(cls, d: dict[str, int]) -> "LinearForm":
        return cls(tuple(sorted((v, c) for v, c in d.items() if c != 0)))

    @classmethod
    def from_word(cls, word) -> "LinearForm":
        d: dict[str, int] = {}
        for v, s in word:
            d[v] = d.get(v, 0) + s
        return cls.from_dict(d)

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class StrictSystem:
    """Rows read as <row, x> > 0."""

    rows: tuple[LinearForm, ...]


def _lf_add(a: LinearForm, b: LinearForm) -> LinearForm:
    d = dict(a.coeffs)
    for v, c in b.coeffs:
        d[v] = d.get(v, 0) + c
    return LinearForm.from_dict(d)


def _lf_neg(a: LinearForm) -> LinearForm:
    return LinearForm(tuple((v, -c) for v, c in a.coeffs))


def _ab_size(j) -> int:
    return sum(len(block) for block in j)


def _ab_capped(j, cap: int):
    if _ab_size(j) > cap:
        raise lg_oracle.GnfSizeError(f"normal form exceeded the word cap ({cap})")
    return j


def _ab_invert(a, cap: int):
    out = {frozenset()}
    for m in a:
        inverted = sorted({_lf_neg(f) for f in m})
        out = lg_oracle._absorb({blk | {f} for blk in out for f in inverted})
        _ab_capped(out, cap)
    return frozenset(out)


def _ab_jom(t: Term, cap: int):
    """Join-of-meets of exponent vectors, distributing in the abelian image.

    Same result as the word-level normal form followed by collapse, but the
    vectors merge during distribution, which keeps intermediate sizes down.
    """
    if isinstance(t, Var):
        return frozenset({frozenset({LinearForm.from_dict({t.name: 1})})})
    if isinstance(t, ConstE):
        return frozenset({frozenset({LinearForm(())})})
    if isinstance(t, ConstF):
        raise ValueError("pointed term: replace f by e before abelianizing")
    absorb = lg_oracle._absorb
    if isinstance(t, Meet):
        a, b = _ab_jom(t.l, cap), _ab_jom(t.r, cap)
        return _ab_capped(absorb(frozenset(m | n for m in a for n in b)), cap)
    if isinstance(t, Join):
        return _ab_capped(absorb(_ab_jom(t.l, cap) | _ab_jom(t.r, cap)), cap)
    if isinstance(t, (Fuse, LDiv, RDiv)):
        a, b = _ab_jom(t.l, cap), _ab_jom(t.r, cap)
        if isinstance(t, LDiv):
            a = _ab_invert(a, cap)
        elif isinstance(t, RDiv):
            b = _ab_invert(b, cap)
        out = set()
        for m in a:
            for n in b:
                out.add(frozenset(_lf_add(w, v) for w in m for v in n))
        return _ab_capped(absorb(frozenset(out)), cap)
    raise TypeError(f"not a term: {t!r}")


def abelianize(t: Term, cap: int = lg_oracle.DEFAULT_WORD_CAP) -> tuple[tuple[LinearForm, ...], ...]:
    """Join-of-meets of exponent vectors: the group normal form, collapsed."""
    blocks = _ab_jom(t, cap)
    return tuple(sorted(tuple(sorted(b, key=lambda f: f.coeffs)) for b in blocks))


# --- exact Fourier-Motzkin ----------------------------------------------------


def _normalize_row(d: dict[str, int]) -> tuple[tuple[str, int], ...] | None:
    d = {v: c for v, c in d.items() if c != 0}
    if not d:
        return None
    g = 0
    for c in d.values():
        g = gcd(g, abs(c))
    return tuple(sorted((v, c // g) for v, c in d.items()))


def strict_infeasible(sys: StrictSystem) -> bool:
    """True iff no rational point makes every row strictly positive.

    Decided by Fourier-Motzkin elimination; the cross-check by Gordan duality
    lives in `gordan_infeasible`.
    """
    rows = set()
    for form in sys.rows:
        if form.is_zero:
            return True  # 0 > 0
        rows.add(_normalize_row(form.as_dict()))
    rows.discard(None)
    while rows:
        var = min(r[0][0] for r in rows)
        pos, neg, rest = [], [], set()
        for r in rows:
            c = dict(r).get(var, 0)
            if c > 0:
                pos.append(r)
            elif c < 0:
                neg.append(r)
            else:
                rest.add(r)
        for p in pos:
            pc = dict(p)[var]
            for n in neg:
                nc = dict(n)[var]
                combined: dict[str, int] = {}
                for v, c in p:
                    combined[v] = combined.get(v, 0) + c * (-nc)
                for v, c in n:
                    combined[v] = combined.get(v, 0) + c * pc
                norm = _normalize_row(combined)
                if norm is None:
                    return True  # strict combination collapsed to 0 > 0
                rest.add(norm)
        rows = rest
    return False


# --- Gordan certificate via exact phase-1 simplex ------------------------------


def _phase1_feasible(eqs: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """Is {x >= 0 : eqs . x = rhs} non-empty?  Bland's rule, exact pivots."""
    m = len(eqs)
    n = len(eqs[0]) if m else 0
    table = []
    for i in range(m):
        row = list(eqs[i])
        b = rhs[i]
        if b < 0:
            row = [-a for a in row]
            b = -b
        row += [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        row.append(b)
        table.append(row)
    basis = [n + i for i in range(m)]
    total = n + m

    while True:
        entering = None
        for j in range(total):
            rc = (Fraction(1) if j >= n else Fraction(0)) - sum(
                table[i][j] for i in range(m) if basis[i] >= n
            )
            if rc < 0:
                entering = j
                break
        if entering is None:
            break
        pivot = None
        for i in range(m):
            if table[i][entering] > 0:
                ratio = table[i][-1] / table[i][entering]
                if pivot is None or ratio < pivot[0] or (
                    ratio == pivot[0] and basis[i] < basis[pivot[1]]
                ):
                    pivot = (ratio, i)
        if pivot is None:
            raise RuntimeError("phase-1 objective is bounded; no pivot row found")
        _, pi = pivot
        pv = table[pi][entering]
        table[pi] = [a / pv for a in table[pi]]
        for i in range(m):
            if i != pi and table[i][entering] != 0:
                f = table[i][entering]
                table[i] = [a - f * b for a, b in zip(table[i], table[pi])]
        basis[pi] = entering

    artificial_mass = sum(table[i][-1] for i in range(m) if basis[i] >= n)
    return artificial_mass == 0


def gordan_infeasible(sys: StrictSystem) -> bool:
    """Gordan duality: the strict system is infeasible iff some non-zero
    non-negative combination of its rows is the zero form."""
    rows = sys.rows
    if not rows:
        return False
    all_vars = sorted({v for r in rows for v, _ in r.coeffs})
    eqs = []
    rhs = []
    for v in all_vars:
        eqs.append([Fraction(r.as_dict().get(v, 0)) for r in rows])
        rhs.append(Fraction(0))
    eqs.append([Fraction(1)] * len(rows))  # normalization: lambda sums to 1
    rhs.append(Fraction(1))
    return _phase1_feasible(eqs, rhs)


# --- validity -----------------------------------------------------------------


@lru_cache(maxsize=65536)
def ablg_valid_leq_e(t: Term, cap: int = lg_oracle.DEFAULT_WORD_CAP) -> bool:
    """True iff t <= e holds in every abelian l-group (f already mapped to e)."""
    for block in abelianize(t, cap):
        if not strict_infeasible(StrictSystem(tuple(block))):
            return False
    return True


def ablg_valid_sequent(s: Sequent, cap: int = lg_oracle.DEFAULT_WORD_CAP) -> bool:
    """Sequent validity over abelian l-groups, both sequent shapes.

    f is identified with e first (abelian l-groups are the pointed algebras
    with f = e), which collapses the right-side sum into a product; the empty
    right side is the empty sum f, hence e after the identification.
    """
    left = product_term(subst_f_to_e(t) for t in s.left)
    right = product_term(subst_f_to_e(t) for t in s.right)
    goal = Fuse(left, LDiv(right, ConstE()))
    return ablg_valid_leq_e(goal, cap)


# --- integer min/max/+ evaluation ----------------------------------------------


def eval_int(t: Term, valuation: dict[str, int]) -> int:
    """Evaluate in the l-group of integers: meet=min, join=max, fusion=+."""
    if isinstance(t, Var):
        return valuation[t.name]
    if isinstance(t, (ConstE, ConstF)):
        return 0
    a, b = eval_int(t.l, valuation), eval_int(t.r, valuation)
    if isinstance(t, Meet):
        return min(a, b)
    if isinstance(t, Join):
        return max(a, b)
    if isinstance(t, Fuse):
        return a + b
    if isinstance(t, LDiv):
        return b - a
    if isinstance(t, RDiv):
        return a - b
    raise TypeError(f"not a term: {t!r}")


def find_integer_refutation(s: Sequent, bound: int = 3) -> dict[str, int] | None:
    """Grid search for an integer valuation falsifying the sequent in Z.

    Sound for both oracles (Z is an abelian l-group, and every abelian
    l-group is an l-group); finding nothing proves nothing.
    """
    names = sorted(sequent_variables(s))
    left = [subst_f_to_e(t) for t in s.left]
    right = [subst_f_to_e(t) for t in s.right]
    for point in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        val = dict(zip(names, point))
        lv = sum(eval_int(t, val) for t in left)
        rv = sum(eval_int(t, val) for t in right)
        if lv > rv:
            return val
    return None


def find_integer_refutation_leq_e(t: Term, bound: int = 3) -> dict[str, int] | None:
    names = sorted(variables(t))
    tt = subst_f_to_e(t)
    for point in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        val = dict(zip(names, point))
        if eval_int(tt, val) > 0:
            return val
    return None


def clear_caches():
    ablg_valid_leq_e.cache_clear()
