"""Finite-algebra workbench: validation, properties, enumeration, refutation.

Residuated lattices are enumerated lattice-first: every residuated fusion
preserves joins in each argument, so it is determined by its values on
join-irreducible pairs; those are filled in by a monotone DFS and the
resulting table is kept only when the unit, associativity, and residual
existence checks pass.  Isomorphism rejection is by canonical form
(lexicographically minimal serialized tables over all relabelings).

Semi-integral residuated pomonoids derive their order from the residual
(a below b iff a\\b = e) rather than storing an order table.

Countermodels found here certify non-derivability: finite integral algebras
are integrally closed, so any theory between them and the full variety is
refuted soundly.  No completeness is claimed: the integrally closed variety
has no finite model property.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

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
    sequent_variables,
)

MAX_SIZE = {"rl": 5, "integral": 5, "sirmonoid": 6, "casari": 5}

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FiniteAlgebra:
    size: int
    e: int
    f: int | None = None
    leq: tuple[tuple[bool, ...], ...] | None = None
    meet: Table | None = None
    join: Table | None = None
    fuse: Table | None = None
    ldiv: Table | None = None
    rdiv: Table | None = None

    @property
    def signature(self) -> str:
        if self.meet is not None:
            return "rl"
        if self.fuse is not None:
            return "sirmonoid"
        return "pbci"

    def le(self, a: int, b: int) -> bool:
        """The algebra's order: lattice order, or the residual-derived one."""
        if self.leq is not None:
            return self.leq[a][b]
        if self.meet is not None:
            return self.meet[a][b] == a
        return self.ldiv[a][b] == self.e

    def is_commutative(self) -> bool:
        if self.fuse is None:
            return all(
                self.ldiv[a][b] == self.rdiv[b][a]
                for a in range(self.size)
                for b in range(self.size)
            )
        return all(
            self.fuse[a][b] == self.fuse[b][a]
            for a in range(self.size)
            for b in range(self.size)
        )


# --- construction helpers ---------------------------------------------------


def _tbl(rows) -> Table:
    return tuple(tuple(r) for r in rows)


def algebra_from_dict(d: dict) -> FiniteAlgebra:
    n = d["size"]

    def unflatten(key, cast=int):
        if key not in d or d[key] is None:
            return None
        flat = d[key]
        if len(flat) != n * n:
            raise ValueError(f"table {key!r} must have {n * n} entries")
        return _tbl(tuple(cast(flat[i * n + j]) for j in range(n)) for i in range(n))

    return FiniteAlgebra(
        size=n,
        e=d["e"],
        f=d.get("f"),
        leq=unflatten("leq", cast=lambda v: bool(int(v))),
        meet=unflatten("meet"),
        join=unflatten("join"),
        fuse=unflatten("fuse"),
        ldiv=unflatten("ldiv"),
        rdiv=unflatten("rdiv"),
    )


def algebra_to_dict(a: FiniteAlgebra) -> dict:
    out: dict = {"size": a.size, "e": a.e}
    if a.f is not None:
        out["f"] = a.f
    if a.leq is not None:
        out["leq"] = [int(v) for row in a.leq for v in row]
    for key in ("meet", "join", "fuse", "ldiv", "rdiv"):
        tab = getattr(a, key)
        if tab is not None:
            out[key] = [v for row in tab for v in row]
    return out


def load_algebra(path: str) -> FiniteAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh))


def dump_algebra(a: FiniteAlgebra) -> str:
    return json.dumps(algebra_to_dict(a), indent=2, sort_keys=True) + "\n"


# --- validation ---------------------------------------------------------------


def validate(a: FiniteAlgebra) -> list[str]:
    """All axiom violations for the algebra's signature; empty iff genuine."""
    if a.signature == "rl":
        return _validate_rl(a)
    if a.signature == "sirmonoid":
        return _validate_sirmonoid(a)
    return _validate_pbci(a)


def _range_ok(a: FiniteAlgebra) -> list[str]:
    out = []
    n = a.size
    for key in ("meet", "join", "fuse", "ldiv", "rdiv"):
        tab = getattr(a, key)
        if tab is None:
            continue
        if len(tab) != n or any(len(r) != n for r in tab):
            out.append(f"table {key} is not {n}x{n}")
            continue
        if any(not (0 <= v < n) for r in tab for v in r):
            out.append(f"table {key} has out-of-range entries")
    if not (0 <= a.e < n):
        out.append("unit index out of range")
    if a.f is not None and not (0 <= a.f < n):
        out.append("f index out of range")
    return out


def _validate_rl(a: FiniteAlgebra) -> list[str]:
    v = _range_ok(a)
    if v:
        return v
    n = a.size
    for key in ("meet", "join", "fuse", "ldiv", "rdiv"):
        if getattr(a, key) is None:
            v.append(f"missing table {key}")
    if v:
        return v
    leq = a.leq
    if leq is None:
        leq = tuple(tuple(a.meet[x][y] == x for y in range(n)) for x in range(n))
    rng = range(n)
    for x in rng:
        if not leq[x][x]:
            v.append(f"order not reflexive at {x}")
    for x in rng:
        for y in rng:
            if x != y and leq[x][y] and leq[y][x]:
                v.append(f"order not antisymmetric at ({x},{y})")
            for z in rng:
                if leq[x][y] and leq[y][z] and not leq[x][z]:
                    v.append(f"order not transitive at ({x},{y},{z})")
    for x in rng:
        for y in rng:
            m, j = a.meet[x][y], a.join[x][y]
            if not (leq[m][x] and leq[m][y]):
                v.append(f"meet({x},{y}) not a lower bound")
            if not (leq[x][j] and leq[y][j]):
                v.append(f"join({x},{y}) not an upper bound")
            for z in rng:
                if leq[z][x] and leq[z][y] and not leq[z][m]:
                    v.append(f"meet({x},{y}) not greatest at {z}")
                if leq[x][z] and leq[y][z] and not leq[j][z]:
                    v.append(f"join({x},{y}) not least at {z}")
    v.extend(_validate_monoid(a))
    # residuation: b <= a\c  iff  ab <= c  iff  a <= c/b
    for x in rng:
        for b in rng:
            for c in rng:
                fused = leq[a.fuse[x][b]][c]
                if leq[b][a.ldiv[x][c]] != fused:
                    v.append(f"residuation (ldiv) fails at ({x},{b},{c})")
                if leq[x][a.rdiv[c][b]] != fused:
                    v.append(f"residuation (rdiv) fails at ({x},{b},{c})")
    if a.leq is not None:
        for x in rng:
            for y in rng:
                if a.leq[x][y] != (a.meet[x][y] == x):
                    v.append(f"stored order disagrees with meet at ({x},{y})")
    return v


def _validate_monoid(a: FiniteAlgebra) -> list[str]:
    v = []
    n = a.size
    for x in range(n):
        if a.fuse[a.e][x] != x or a.fuse[x][a.e] != x:
            v.append(f"unit law fails at {x}")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if a.fuse[a.fuse[x][y]][z] != a.fuse[x][a.fuse[y][z]]:
                    v.append(f"associativity fails at ({x},{y},{z})")
    return v


def _sirmonoid_axioms(a: FiniteAlgebra, with_fuse: bool) -> list[str]:
    """The equational axioms (i)-(vi) of semi-integral residuated pomonoids;
    (v) only when fusion is present."""
    v = []
    n = a.size
    e = a.e
    ld, rd = a.ldiv, a.rdiv
    rng = range(n)
    for x in rng:
        if ld[e][x] != x:
            v.append(f"axiom (iii) e\\x = x fails at {x}")
        if rd[x][e] != x:
            v.append(f"axiom (iv) x/e = x fails at {x}")
    for x in rng:
        for y in rng:
            if ld[x][y] == e and ld[y][x] == e and x != y:
                v.append(f"axiom (vi) antisymmetry fails at ({x},{y})")
            for z in rng:
                if rd[rd[ld[x][z]][ld[y][z]]][ld[x][y]] != e:
                    v.append(f"axiom (i) fails at ({x},{y},{z})")
                if ld[rd[y][x]][ld[rd[z][y]][rd[z][x]]] != e:
                    v.append(f"axiom (ii) fails at ({x},{y},{z})")
                if with_fuse and ld[a.fuse[x][y]][z] != ld[y][ld[x][z]]:
                    v.append(f"axiom (v) fails at ({x},{y},{z})")
    return v


def _order_checks(a: FiniteAlgebra) -> list[str]:
    """The induced relation a below b iff a\\b = e must be a partial order
    with e maximal, agreeing with b/a = e."""
    v = []
    n = a.size
    e = a.e
    rng = range(n)
    below = [[a.ldiv[x][y] == e for y in rng] for x in rng]
    for x in rng:
        if not below[x][x]:
            v.append(f"induced order not reflexive at {x} (not integrally closed)")
        if a.rdiv[x][x] != e:
            v.append(f"x/x = e fails at {x}")
        for y in rng:
            if below[x][y] != (a.rdiv[y][x] == e):
                v.append(f"left/right order disagreement at ({x},{y})")
            for z in rng:
                if below[x][y] and below[y][z] and not below[x][z]:
                    v.append(f"induced order not transitive at ({x},{y},{z})")
    for x in rng:
        if below[e][x] and x != e:
            v.append(f"e is not maximal: e below {x}")
    return v


def _validate_sirmonoid(a: FiniteAlgebra) -> list[str]:
    v = _range_ok(a)
    if v:
        return v
    for key in ("fuse", "ldiv", "rdiv"):
        if getattr(a, key) is None:
            v.append(f"missing table {key}")
    if a.meet is not None or a.join is not None:
        v.append("sirmonoid signature must not carry lattice tables")
    if v:
        return v
    v.extend(_validate_monoid(a))
    v.extend(_order_checks(a))
    v.extend(_sirmonoid_axioms(a, with_fuse=True))
    # residuation with respect to the induced order
    n, e = a.size, a.e
    rng = range(n)
    below = [[a.ldiv[x][y] == e for y in rng] for x in rng]
    for x in rng:
        for b in rng:
            for c in rng:
                fused = below[a.fuse[x][b]][c]
                if below[b][a.ldiv[x][c]] != fused:
                    v.append(f"pomonoid residuation (ldiv) fails at ({x},{b},{c})")
                if below[x][a.rdiv[c][b]] != fused:
                    v.append(f"pomonoid residuation (rdiv) fails at ({x},{b},{c})")
    return v


def _validate_pbci(a: FiniteAlgebra) -> list[str]:
    v = _range_ok(a)
    if v:
        return v
    if a.ldiv is None or a.rdiv is None:
        return ["missing table ldiv or rdiv"]
    v.extend(_order_checks(a))
    v.extend(_sirmonoid_axioms(a, with_fuse=False))
    return v


# --- term evaluation -----------------------------------------------------------


def eval_term(a: FiniteAlgebra, valuation: dict[str, int], t: Term) -> int:
    if isinstance(t, Var):
        if t.name not in valuation:
            raise ValueError(f"unbound variable {t.name!r}")
        return valuation[t.name]
    if isinstance(t, ConstE):
        return a.e
    if isinstance(t, ConstF):
        if a.f is None:
            raise ValueError("algebra is not pointed")
        return a.f
    l, r = eval_term(a, valuation, t.l), eval_term(a, valuation, t.r)
    table = {
        Meet: a.meet,
        Join: a.join,
        Fuse: a.fuse,
        LDiv: a.ldiv,
        RDiv: a.rdiv,
    }[type(t)]
    if table is None:
        raise ValueError(f"operation {type(t).__name__} not in this signature")
    return table[l][r]


# --- properties ------------------------------------------------------------------


def check_property(a: FiniteAlgebra, name: str, arg: int | None = None) -> bool:
    """Exhaustive evaluation of a named property's quantifiers."""
    n, e = a.size, a.e
    rng = range(n)

    def neg(x):
        return a.ldiv[x][e]

    if name == "integral":
        return all(a.le(x, e) for x in rng)
    if name == "integrally_closed":
        return all(a.ldiv[x][x] == e and a.rdiv[x][x] == e for x in rng)
    if name == "e_cyclic":
        return all(a.ldiv[x][e] == a.rdiv[e][x] for x in rng)
    if name == "commutative":
        return a.is_commutative()
    if name == "neg_swap_ldiv":
        return all(neg(a.ldiv[x][y]) == a.rdiv[neg(y)][neg(x)] for x in rng for y in rng)
    if name == "neg_swap_rdiv":
        return all(neg(a.rdiv[y][x]) == a.ldiv[neg(x)][neg(y)] for x in rng for y in rng)
    if name == "neg_cancel_left":
        return all(
            a.le(y, e)
            for x in rng
            for y in rng
            if a.le(a.fuse[a.fuse[x][neg(x)]][y], e)
        )
    if name == "neg_cancel_right":
        return all(
            a.le(y, e)
            for x in rng
            for y in rng
            if a.le(a.fuse[a.fuse[y][neg(x)]][x], e)
        )
    if name == "torsion_free":
        bound = arg if arg is not None else n
        for x in rng:
            power = e
            for _ in range(1, bound + 1):
                power = a.fuse[power][x]
                if power == e and x != e:
                    return False
        return True
    if name == "rl":
        return a.signature == "rl" and not validate(a)
    if name == "sirmonoid":
        return a.signature == "sirmonoid" and not validate(a)
    if name == "pbci":
        if a.ldiv is None or a.rdiv is None:
            return False
        reduct = FiniteAlgebra(size=n, e=e, ldiv=a.ldiv, rdiv=a.rdiv)
        return not validate(reduct)
    if name == "casari":
        if a.f is None or a.signature != "rl":
            raise ValueError("casari check needs a pointed lattice-signature algebra")
        if not (a.is_commutative() and check_property(a, "integrally_closed")):
            return False
        if a.fuse[a.f][a.f] != a.f:
            return False
        return all(a.ldiv[a.ldiv[x][a.f]][a.f] == x for x in rng)
    raise ValueError(f"unknown property {name!r}")


# --- enumeration -------------------------------------------------------------------


def _lattices(n: int):
    """All labeled lattice orders on 0..n-1 as (leq, meet, join) triples."""
    if n == 1:
        yield ((True,),), ((0,),), ((0,),)
        return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for combo in itertools.product((0, 1, 2), repeat=len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), rel in zip(pairs, combo):
            if rel == 1:
                leq[i][j] = True
            elif rel == 2:
                leq[j][i] = True
        ok = True
        for i in range(n):
            for j in range(n):
                if ok and leq[i][j]:
                    for k in range(n):
                        if leq[j][k] and not leq[i][k]:
                            ok = False
                            break
        if not ok:
            continue
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        lattice = True
        for i in range(n):
            if not lattice:
                break
            for j in range(n):
                lower = [k for k in range(n) if leq[k][i] and leq[k][j]]
                glb = [k for k in lower if all(leq[m][k] for m in lower)]
                upper = [k for k in range(n) if leq[i][k] and leq[j][k]]
                lub = [k for k in upper if all(leq[k][m] for m in upper)]
                if len(glb) != 1 or len(lub) != 1:
                    lattice = False
                    break
                meet[i][j] = glb[0]
                join[i][j] = lub[0]
        if lattice:
            yield _tbl(leq), _tbl(meet), _tbl(join)


def _join_irreducibles(n, leq, join):
    out = []
    for x in range(n):
        strictly_below = [y for y in range(n) if leq[y][x] and y != x]
        if not strictly_below:
            continue  # bottom is the empty join
        acc = None
        for y in strictly_below:
            acc = y if acc is None else join[acc][y]
        if acc != x:
            out.append(x)
    return out


def _lattice_reps(n: int):
    """One labeled representative per isomorphism class of n-element lattices;
    searching fuse tables over representatives still reaches every algebra
    up to isomorphism."""
    seen = set()
    for leq, meet, join in _lattices(n):
        best = None
        for perm in itertools.permutations(range(n)):
            inv = [0] * n
            for i, p in enumerate(perm):
                inv[p] = i
            serial = tuple(leq[inv[x]][inv[y]] for x in range(n) for y in range(n))
            if best is None or serial < best:
                best = serial
        if best not in seen:
            seen.add(best)
            yield leq, meet, join


def _enumerate_rl(n: int, integral_only: bool):
    for leq, meet, join in _lattice_reps(n):
        bottom = next(x for x in range(n) if all(leq[x][y] for y in range(n)))
        top = next(x for x in range(n) if all(leq[y][x] for y in range(n)))
        jis = _join_irreducibles(n, leq, join)
        decomp = [
            tuple(j for j in jis if leq[j][x]) for x in range(n)
        ]
        e_candidates = [top] if integral_only else range(n)
        for e in e_candidates:
            yield from _fill_fuse(n, leq, meet, join, jis, decomp, bottom, e)


def _fill_fuse(n, leq, meet, join, jis, decomp, bottom, e):
    cells = [(j, k) for j in jis for k in jis]

    def joined(values, x, y):
        acc = bottom
        for j in decomp[x]:
            for k in decomp[y]:
                acc = join[acc][values[(j, k)]]
        return acc

    def assign(idx, values):
        if idx == len(cells):
            fuse = [[joined(values, x, y) for y in range(n)] for x in range(n)]
            alg = _finish_rl(n, leq, meet, join, _tbl(fuse), e)
            if alg is not None:
                yield alg
            return
        j, k = cells[idx]
        for v in range(n):
            ok = True
            for (j2, k2), v2 in values.items():
                if leq[j2][j] and leq[k2][k] and not leq[v2][v]:
                    ok = False
                    break
                if leq[j][j2] and leq[k][k2] and not leq[v][v2]:
                    ok = False
                    break
            if ok:
                values[(j, k)] = v
                yield from assign(idx + 1, values)
                del values[(j, k)]

    yield from assign(0, {})


def _finish_rl(n, leq, meet, join, fuse, e):
    for x in range(n):
        if fuse[e][x] != x or fuse[x][e] != x:
            return None
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if fuse[fuse[x][y]][z] != fuse[x][fuse[y][z]]:
                    return None
    ldiv = [[0] * n for _ in range(n)]
    rdiv = [[0] * n for _ in range(n)]
    for x in range(n):
        for c in range(n):
            sols = [b for b in range(n) if leq[fuse[x][b]][c]]
            best = [b for b in sols if all(leq[b2][b] for b2 in sols)]
            if len(best) != 1:
                return None
            ldiv[x][c] = best[0]
            sols = [b for b in range(n) if leq[fuse[b][x]][c]]
            best = [b for b in sols if all(leq[b2][b] for b2 in sols)]
            if len(best) != 1:
                return None
            rdiv[x][c] = best[0]  # note: rdiv[c][x] in table convention below
    rdiv_tab = [[rdiv[y][x] for y in range(n)] for x in range(n)]
    alg = FiniteAlgebra(
        size=n, e=e, leq=leq, meet=meet, join=join, fuse=fuse,
        ldiv=_tbl(ldiv), rdiv=_tbl(rdiv_tab),
    )
    if validate(alg):
        return None
    return alg


def _canonical_form(a: FiniteAlgebra):
    n = a.size
    tables = [t for t in (a.meet, a.join, a.fuse, a.ldiv, a.rdiv) if t is not None]
    best = None
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        serial = [perm[a.e], -1 if a.f is None else perm[a.f]]
        if a.leq is not None:
            serial.extend(
                a.leq[inv[x]][inv[y]] for x in range(n) for y in range(n)
            )
        for t in tables:
            serial.extend(perm[t[inv[x]][inv[y]]] for x in range(n) for y in range(n))
        key = tuple(serial)
        if best is None or key < best:
            best = key
    return best


def _enumerate_monoids(n: int, e: int):
    """All monoid tables on 0..n-1 with unit e, associativity-pruned DFS."""
    cells = [(x, y) for x in range(n) for y in range(n) if x != e and y != e]
    fuse = [[0] * n for _ in range(n)]
    for x in range(n):
        fuse[e][x] = x
        fuse[x][e] = x
    known = [[x == e or y == e for y in range(n)] for x in range(n)]

    def assoc_ok(x, y):
        # check all triples whose four lookups are now determined
        for a_ in range(n):
            for b_ in range(n):
                for c_ in range(n):
                    if not (known[a_][b_] and known[b_][c_]):
                        continue
                    ab = fuse[a_][b_]
                    bc = fuse[b_][c_]
                    if known[ab][c_] and known[a_][bc]:
                        if fuse[ab][c_] != fuse[a_][bc]:
                            return False
        return True

    def assign(idx):
        if idx == len(cells):
            yield _tbl(fuse)
            return
        x, y = cells[idx]
        for v in range(n):
            fuse[x][y] = v
            known[x][y] = True
            if assoc_ok(x, y):
                yield from assign(idx + 1)
            known[x][y] = False

    yield from assign(0)


def _enumerate_sirmonoids(n: int):
    e = 0  # unit position is normalized away by canonicalization anyway
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for fuse in _enumerate_monoids(n, e):
        for combo in itertools.product((0, 1, 2), repeat=len(pairs)):
            below = [[i == j for j in range(n)] for i in range(n)]
            for (i, j), rel in zip(pairs, combo):
                if rel == 1:
                    below[i][j] = True
                elif rel == 2:
                    below[j][i] = True
            if any(below[e][x] for x in range(n) if x != e):
                continue  # e must be maximal
            ok = True
            for i in range(n):
                for j in range(n):
                    if ok and below[i][j]:
                        for k in range(n):
                            if below[j][k] and not below[i][k]:
                                ok = False
                                break
            if not ok:
                continue
            # monotonicity of fusion
            if any(
                below[x][y] and not (below[fuse[z][x]][fuse[z][y]] and below[fuse[x][z]][fuse[y][z]])
                for x in range(n)
                for y in range(n)
                for z in range(n)
            ):
                continue
            alg = _finish_sirmonoid(n, e, fuse, below)
            if alg is not None:
                yield alg


def _finish_sirmonoid(n, e, fuse, below):
    ldiv = [[0] * n for _ in range(n)]
    rdiv = [[0] * n for _ in range(n)]
    for a_ in range(n):
        for c in range(n):
            sols = [b for b in range(n) if below[fuse[a_][b]][c]]
            best = [b for b in sols if all(below[b2][b] for b2 in sols)]
            if len(best) != 1:
                return None
            ldiv[a_][c] = best[0]
            sols = [b for b in range(n) if below[fuse[b][a_]][c]]
            best = [b for b in sols if all(below[b2][b] for b2 in sols)]
            if len(best) != 1:
                return None
            rdiv[c][a_] = best[0]
    # semi-integrality: the induced order must coincide with the given one
    for x in range(n):
        for y in range(n):
            if (ldiv[x][y] == e) != below[x][y]:
                return None
    alg = FiniteAlgebra(size=n, e=e, fuse=fuse, ldiv=_tbl(ldiv), rdiv=_tbl(rdiv))
    if validate(alg):
        return None
    return alg


def _enumerate_casari(n: int):
    for base in enumerate_algebras(n, "integral"):
        if not base.is_commutative():
            continue
        for f in range(n):
            if base.fuse[f][f] != f:
                continue
            cand = FiniteAlgebra(
                size=n, e=base.e, f=f, leq=base.leq, meet=base.meet,
                join=base.join, fuse=base.fuse, ldiv=base.ldiv, rdiv=base.rdiv,
            )
            if all(cand.ldiv[cand.ldiv[x][f]][f] == x for x in range(n)):
                yield cand


@lru_cache(maxsize=None)
def enumerate_algebras(size: int, cls: str) -> tuple[FiniteAlgebra, ...]:
    """All non-isomorphic validated algebras of the class at this size."""
    if cls not in MAX_SIZE:
        raise ValueError(f"unknown class {cls!r} (expected one of {sorted(MAX_SIZE)})")
    if size < 1 or size > MAX_SIZE[cls]:
        raise ValueError(f"size {size} out of range for class {cls} (max {MAX_SIZE[cls]})")
    if cls == "rl":
        gen = _enumerate_rl(size, integral_only=False)
    elif cls == "integral":
        gen = _enumerate_rl(size, integral_only=True)
    elif cls == "sirmonoid":
        gen = _enumerate_sirmonoids(size)
    else:
        gen = _enumerate_casari(size)
    seen = set()
    out = []
    for alg in gen:
        key = _canonical_form(alg)
        if key not in seen:
            seen.add(key)
            out.append(alg)
    return tuple(out)


# --- refutation ---------------------------------------------------------------------


def _eval_sequent(a: FiniteAlgebra, s: Sequent, valuation: dict[str, int]) -> bool:
    """Truth of the sequent in the algebra under the valuation."""
    lv = a.e
    for t in s.left:
        lv = a.fuse[lv][eval_term(a, valuation, t)]
    if len(s.right) == 1:
        return a.le(lv, eval_term(a, valuation, s.right[0]))
    # multiple conclusions: sum with a + b = (a -> f) -> b, empty sum = f
    if a.f is None:
        raise ValueError("multiple-conclusion sequents need a pointed algebra")
    if not s.right:
        rv = a.f
    else:
        vals = [eval_term(a, valuation, t) for t in s.right]
        rv = vals[-1]
        for v in reversed(vals[:-1]):
            rv = a.ldiv[a.ldiv[v][a.f]][rv]
    return a.le(lv, rv)


def refute(
    s: Sequent,
    size_bound: int,
    cls: str,
    commutative: bool = False,
) -> tuple[FiniteAlgebra, dict[str, int]] | None:
    """Search validated algebras of the class up to the bound for a falsifying
    valuation.  A hit certifies non-derivability for every theory whose
    algebras include the class; exhausting the bound proves nothing."""
    if cls not in MAX_SIZE:
        raise ValueError(f"unknown class {cls!r} (expected one of {sorted(MAX_SIZE)})")
    if size_bound > MAX_SIZE[cls]:
        raise ValueError(f"size bound {size_bound} exceeds the cap for {cls} ({MAX_SIZE[cls]})")
    names = sorted(sequent_variables(s))
    for size in range(1, size_bound + 1):
        for alg in enumerate_algebras(size, cls):
            if commutative and not alg.is_commutative():
                continue
            for point in itertools.product(range(size), repeat=len(names)):
                valuation = dict(zip(names, point))
                if not _eval_sequent(alg, s, valuation):
                    return alg, valuation
    return None


# --- negative cone --------------------------------------------------------------------


def negative_cone(a: FiniteAlgebra) -> FiniteAlgebra:
    """Subalgebra on the elements below e, with residuals clipped by e."""
    if a.signature != "rl":
        raise ValueError("negative cone is defined for the lattice signature")
    universe = [x for x in range(a.size) if a.le(x, a.e)]
    idx = {x: i for i, x in enumerate(universe)}
    m = len(universe)

    def sub(table, clip=False):
        rows = []
        for x in universe:
            row = []
            for y in universe:
                v = table[x][y]
                if clip:
                    v = a.meet[v][a.e]
                row.append(idx[v])
            rows.append(tuple(row))
        return tuple(rows)

    return FiniteAlgebra(
        size=m,
        e=idx[a.e],
        leq=tuple(tuple(a.leq[x][y] if a.leq else a.meet[x][y] == x for y in universe) for x in universe),
        meet=sub(a.meet),
        join=sub(a.join),
        fuse=sub(a.fuse),
        ldiv=sub(a.ldiv, clip=True),
        rdiv=sub(a.rdiv, clip=True),
    )


def clear_caches():
    enumerate_algebras.cache_clear()
