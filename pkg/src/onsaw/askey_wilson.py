"""Higher-rank classical Askey-Wilson quotients.

Finitely presented Lie algebras over ParamPoly(alpha) given by explicit
bracket tables for ranks 3 and 4, their truncated generating matrices
B(x) with global denominator alpha + (-1)^(N+1) x - 1/x, an exact (no
truncation) reflection-relation certificate, nested-commutator
presentation checks, and a solver that extracts the bracket table for
general N by imposing the reflection relation on the word ansatz.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import ParamPoly, SpectralLaurent, parse_param_poly
from .linsolve import SparseEliminator, matrix_rank, solve_polynomial
from .report import Report, timer
from .rmatrix import cleared_rbar_pair, parity_sign
from .series import BiSeries, GeneratorMatrix
from .symcomb import SymbolCombination

ALPHA = ParamPoly.variable("alpha")


@dataclass(frozen=True, order=True)
class Word:
    """Nested commutator [e_a, [e_b, [..., e_z]]] over abstract generators."""

    letters: tuple

    def __str__(self):
        if len(self.letters) == 1:
            return f"e{self.letters[0]}"
        return "f(" + ",".join(str(l) for l in self.letters) + ")"


def cyclic_word(i: int, j: int, rank: int) -> Word:
    """The ascending cyclic word from i to j (indices 1..rank, wrapping)."""
    i = (i - 1) % rank + 1
    j = (j - 1) % rank + 1
    letters = [i]
    k = i
    while k != j:
        k = k % rank + 1
        letters.append(k)
    return Word(tuple(letters))


class TableElement(SymbolCombination):
    """Vector over a StructTable basis (symbols are basis indices)."""

    __slots__ = ()

    @staticmethod
    def symbol_str(sym) -> str:
        return f"<{sym}>"


class StructTable:
    """Finitely presented Lie algebra: named basis + antisymmetric table."""

    def __init__(self, rank: int, basis: list, gen_indices: list, words: list):
        self.rank = rank
        self.basis = list(basis)
        self.index = {name: k for k, name in enumerate(basis)}
        self.gen_indices = list(gen_indices)
        self.words = list(words)  # per basis: (Fraction, Word) or None
        self.table: dict = {}     # (ia, ib) with ia < ib -> {ic: ParamPoly}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zero(self) -> TableElement:
        return TableElement(self.dim, {})

    def unit(self, name_or_idx) -> TableElement:
        k = name_or_idx if isinstance(name_or_idx, int) else self.index[name_or_idx]
        return TableElement(self.dim, {k: ParamPoly.one()})

    def generator(self, i: int) -> TableElement:
        return self.unit(self.gen_indices[i - 1])

    def set_bracket(self, ia: int, ib: int, vec: dict) -> None:
        vec = {k: v for k, v in vec.items() if not v.is_zero()}
        if ia == ib:
            if vec:
                raise ValueError(f"[x,x] != 0 at basis {self.basis[ia]}")
            return
        key, store = ((ia, ib), vec) if ia < ib else (
            (ib, ia), {k: -v for k, v in vec.items()})
        cur = self.table.get(key)
        if cur is None:
            if store:
                self.table[key] = store
        elif cur != store:
            raise ValueError(
                f"inconsistent bracket for ({self.basis[key[0]]},{self.basis[key[1]]})"
            )

    def bracket_basis(self, ia: int, ib: int) -> dict:
        if ia == ib:
            return {}
        if ia < ib:
            return self.table.get((ia, ib), {})
        neg = self.table.get((ib, ia), {})
        return {k: -v for k, v in neg.items()}

    def bracket(self, u: TableElement, v: TableElement) -> TableElement:
        out = self.zero()
        for ia, ca in u.coeffs.items():
            for ib, cb in v.coeffs.items():
                c = ca * cb
                for ic, w in self.bracket_basis(ia, ib).items():
                    out.add_term(ic, c * w)
        return out

    def eval_word(self, word: Word, gens: list | None = None) -> TableElement:
        """Right-nested commutator evaluation over generator images."""
        if gens is None:
            gens = [self.generator(i) for i in range(1, self.rank + 1)]
        letters = word.letters
        v = gens[letters[-1] - 1]
        for l in reversed(letters[:-1]):
            v = self.bracket(gens[l - 1], v)
        return v

    def jacobi_residual(self, ia: int, ib: int, ic: int) -> TableElement:
        a, b, c = self.unit(ia), self.unit(ib), self.unit(ic)
        return (
            self.bracket(a, self.bracket(b, c))
            + self.bracket(b, self.bracket(c, a))
            + self.bracket(c, self.bracket(a, b))
        )


def check_jacobi(t: StructTable, label: str = "jacobi") -> Report:
    report = Report("verify aw-jacobi", {"basis": t.dim})
    with timer(report):
        bad = None
        for ia, ib, ic in itertools.combinations(range(t.dim), 3):
            resid = t.jacobi_residual(ia, ib, ic)
            if not resid.is_zero():
                bad = (
                    f"triple ({t.basis[ia]},{t.basis[ib]},{t.basis[ic]}) "
                    f"residual {resid}"
                )
                break
        report.add(label, bad is None, bad)
    return report


# -- the rank-3 table -----------------------------------------------------------


def _eps3(i, j, k) -> int:
    return {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
            (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1}.get((i, j, k), 0)


def aw3_table() -> StructTable:
    """The eight-dimensional rank-3 quotient with symbolic alpha."""
    basis = ["e1", "e2", "e3", "f1", "f2", "f3", "g1", "g2"]
    words = [
        (Fraction(1), Word((1,))), (Fraction(1), Word((2,))), (Fraction(1), Word((3,))),
        (Fraction(1), Word((2, 3))), (Fraction(1), Word((3, 1))), (Fraction(1), Word((1, 2))),
        (Fraction(1), Word((1, 2, 3))), (Fraction(1), Word((2, 3, 1))),
    ]
    t = StructTable(3, basis, [0, 1, 2], words)
    one = ParamPoly.one()

    def g(j):  # g3 resolved into the basis
        if j == 3:
            return {t.index["g1"]: -one, t.index["g2"]: -one}
        return {t.index[f"g{j}"]: one}

    def vec(pairs):
        out: dict = {}
        for name_or_map, c in pairs:
            if isinstance(name_or_map, dict):
                for k, w in name_or_map.items():
                    out[k] = out.get(k, ParamPoly.zero()) + w * c
            else:
                k = t.index[name_or_map]
                out[k] = out.get(k, ParamPoly.zero()) + ParamPoly.const(1) * c
        return out

    for i in range(1, 4):
        for j in range(1, 4):
            # [e_i, e_j] = eps_ijk f_k
            pairs = [(f"f{k}", Fraction(_eps3(i, j, k))) for k in range(1, 4) if _eps3(i, j, k)]
            t.set_bracket(t.index[f"e{i}"], t.index[f"e{j}"], vec(pairs))
            # [e_i, f_j] = d_ij g_i - eps_ijk e_k
            pairs = [(f"e{k}", Fraction(-_eps3(i, j, k))) for k in range(1, 4) if _eps3(i, j, k)]
            if i == j:
                pairs.append((g(i), Fraction(1)))
            t.set_bracket(t.index[f"e{i}"], t.index[f"f{j}"], vec(pairs))
            # [f_i, f_j] = eps_ijk (f_k - alpha e_k)
            out: dict = {}
            for k in range(1, 4):
                e = _eps3(i, j, k)
                if e:
                    out[t.index[f"f{k}"]] = ParamPoly.const(e)
                    out[t.index[f"e{k}"]] = ALPHA * (-e)
            t.set_bracket(t.index[f"f{i}"], t.index[f"f{j}"], out)
        for j in (1, 2):
            # [e_i, g_j] = alpha e_i - 2 f_i + 3 d_ij (2 f_i - alpha e_i)
            d = 3 if i == j else 0
            out = {
                t.index[f"e{i}"]: ALPHA * (1 - d),
                t.index[f"f{i}"]: ParamPoly.const(-2 + 2 * d),
            }
            t.set_bracket(t.index[f"e{i}"], t.index[f"g{j}"], out)
            # [f_i, g_j] = -alpha f_i - 2 e_i + 3 d_ij (alpha f_i + 2 e_i)
            out = {
                t.index[f"f{i}"]: ALPHA * (-1 + d),
                t.index[f"e{i}"]: ParamPoly.const(-2 + 2 * d),
            }
            t.set_bracket(t.index[f"f{i}"], t.index[f"g{j}"], out)
    t.set_bracket(t.index["g1"], t.index["g2"], {})
    return t


# -- the rank-4 table -----------------------------------------------------------


def aw4_table() -> StructTable:
    """The fifteen-dimensional rank-4 quotient, indices mod 4."""
    basis = [f"e{i}" for i in range(1, 5)] + [f"f{i}" for i in range(1, 5)] \
        + [f"g{i}" for i in range(1, 5)] + [f"h{i}" for i in range(1, 4)]
    words = [(Fraction(1), Word((i,))) for i in range(1, 5)]
    words += [(Fraction(1), cyclic_word(i + 2, i + 3, 4)) for i in range(1, 5)]
    words += [(Fraction(-1), cyclic_word(i + 1, i + 3, 4)) for i in range(1, 5)]
    words += [(Fraction(1), cyclic_word(l, l - 1, 4)) for l in range(1, 4)]
    t = StructTable(4, basis, [0, 1, 2, 3], words)

    def m(i):  # mod-4 into 1..4
        return (i - 1) % 4 + 1

    one = ParamPoly.one()

    def h(j):
        j = m(j)
        if j == 4:
            return {t.index[f"h{k}"]: -one for k in (1, 2, 3)}
        return {t.index[f"h{j}"]: one}

    def base(name, i):
        return {t.index[f"{name}{m(i)}"]: one}

    def add(vec, other, c):
        for k, w in other.items():
            cur = vec.get(k, ParamPoly.zero()) + w * c
            if cur.is_zero():
                vec.pop(k, None)
            else:
                vec[k] = cur
        return vec

    pending = []  # (ia, ib, vec) gathered from every displayed instance

    for i in range(1, 5):
        # [e_i, e_{i+1}] = f_{i+2};  [e_i, e_{i+2}] = 0
        pending.append((f"e{i}", f"e{m(i+1)}", base("f", i + 2)))
        pending.append((f"e{i}", f"e{m(i+2)}", {}))
        for j in range(1, 5):
            # [e_i, f_j]
            vec: dict = {}
            if j == i:
                add(vec, base("g", i + 1), Fraction(1))
            if j == m(i - 1):
                add(vec, base("g", i - 1), Fraction(-1))
            if j == m(i + 1):
                add(vec, base("e", i - 1), Fraction(-1))
            if j == m(i + 2):
                add(vec, base("e", i + 1), Fraction(1))
            pending.append((f"e{i}", f"f{j}", vec))
            # [e_i, g_j]
            vec = {}
            if j == i:
                add(vec, h(i), Fraction(-1))
            if j == m(i + 1):
                add(vec, base("f", i), Fraction(1))
            if j == m(i - 1):
                add(vec, base("f", i - 1), Fraction(-1))
            pending.append((f"e{i}", f"g{j}", vec))
            # [e_i, h_j] (j = 4 resolved; every instance recorded)
            vec = {}
            if j == i:
                add(vec, base("e", i), ALPHA * -2)
                add(vec, base("g", i), Fraction(-4))
            if j in (m(i + 1), m(i - 1)):
                add(vec, base("e", i), ALPHA)
                add(vec, base("g", i), Fraction(2))
            pending.append((f"e{i}", f"h{j}" if j < 4 else "h4", vec))
            # [f_i, g_j]
            vec = {}
            if j == m(i - 1):
                add(vec, base("e", i - 2), -ALPHA)
                add(vec, base("g", i - 2), Fraction(-1))
            if j == m(i - 2):
                add(vec, base("e", i - 1), ALPHA)
                add(vec, base("g", i - 1), Fraction(1))
            if j == i:
                add(vec, base("e", i + 1), Fraction(-1))
            if j == m(i + 1):
                add(vec, base("e", i), Fraction(1))
            pending.append((f"f{i}", f"g{j}", vec))
            # [f_i, h_j]
            w = (1 if j == i else 0) - (1 if j == m(i - 1) else 0) \
                + (1 if j == m(i + 1) else 0) - (1 if j == m(i - 2) else 0)
            vec = {}
            if w:
                add(vec, base("f", i), ALPHA * w)
                add(vec, base("f", i + 2), Fraction(2 * w))
            pending.append((f"f{i}", f"h{j}" if j < 4 else "h4", vec))
            # [g_i, h_j]
            vec = {}
            if j == i:
                add(vec, base("e", i), Fraction(4))
                add(vec, base("g", i), ALPHA * 2)
            if j in (m(i + 1), m(i - 1)):
                add(vec, base("e", i), Fraction(-2))
                add(vec, base("g", i), -ALPHA)
            pending.append((f"g{i}", f"h{j}" if j < 4 else "h4", vec))
        # [f_i, f_{i+1}] = 0;  [f_i, f_{i+2}] = -h_i - h_{i+1}
        pending.append((f"f{i}", f"f{m(i+1)}", {}))
        vec = add(add({}, h(i), Fraction(-1)), h(i + 1), Fraction(-1))
        pending.append((f"f{i}", f"f{m(i+2)}", vec))
        # [g_i, g_{i+1}] = -alpha f_i - f_{i+2};  [g_i, g_{i+2}] = 0
        vec = add({t.index[f"f{m(i)}"]: -ALPHA}, base("f", i + 2), Fraction(-1))
        pending.append((f"g{i}", f"g{m(i+1)}", vec))
        pending.append((f"g{i}", f"g{m(i+2)}", {}))
    for a in range(1, 4):
        for b in range(1, 4):
            pending.append((f"h{a}", f"h{b}", {}))

    deferred = []
    for na, nb, vec in pending:
        if na == "h4" or nb == "h4":
            deferred.append((na, nb, vec))
            continue
        t.set_bracket(t.index[na], t.index[nb], vec)
    # instances that referenced the dependent symbol become consistency checks
    for na, nb, vec in deferred:
        lhs = t.zero()
        if nb == "h4":
            u = t.unit(na)
            for k in (1, 2, 3):
                lhs = lhs + t.bracket(u, t.unit(f"h{k}")).scale(-1)
        want = TableElement(t.dim, {k: v for k, v in vec.items() if not v.is_zero()})
        if not (lhs - want).is_zero():
            raise ValueError(f"mod-4 instance [{na}, h4] inconsistent with the table")
    return t


# -- generating matrices ---------------------------------------------------------


@dataclass
class AWMatrix:
    """Numerators over the global denominator alpha + (-1)^(N+1) x - 1/x.

    Entries carry the overall factor 2; exponent range is -1..1.
    """

    rank: int
    den: SpectralLaurent
    entries: dict  # (i, j) 1-based -> {x exponent -> element}

    def entry(self, i: int, j: int) -> dict:
        return self.entries.get((i, j), {})


def aw_denominator(rank: int, v: str = "x") -> SpectralLaurent:
    sgn = parity_sign(rank + 1)
    return (SpectralLaurent.const(ALPHA)
            + SpectralLaurent.variable(v) * sgn
            - SpectralLaurent.variable(v, -1))


def build_B_aw(rank: int) -> AWMatrix:
    """Literal generating matrices for ranks 3 and 4."""
    if rank == 3:
        t = aw3_table()
        layout = {
            (1, 1): {0: [("g1", 2, 3), ("g2", 1, 3)]},
            (1, 2): {0: [("f1", 1, 1)], -1: [("e1", -1, 1)]},
            (1, 3): {0: [("e3", 1, 1)], -1: [("f3", 1, 1)]},
            (2, 1): {1: [("e1", -1, 1)], 0: [("f1", -1, 1)]},
            (2, 2): {0: [("g1", -1, 3), ("g2", 1, 3)]},
            (2, 3): {0: [("f2", 1, 1)], -1: [("e2", -1, 1)]},
            (3, 1): {0: [("e3", 1, 1)], 1: [("f3", -1, 1)]},
            (3, 2): {1: [("e2", -1, 1)], 0: [("f2", -1, 1)]},
            (3, 3): {0: [("g1", -1, 3), ("g2", -2, 3)]},
        }
    elif rank == 4:
        t = aw4_table()
        layout = {
            (1, 1): {0: [("h1", 3, 4), ("h2", 1, 2), ("h3", 1, 4)]},
            (1, 2): {0: [("g1", 1, 1)], -1: [("e1", 1, 1)]},
            (1, 3): {0: [("f1", 1, 1)], -1: [("f3", 1, 1)]},
            (1, 4): {0: [("e4", -1, 1)], -1: [("g4", -1, 1)]},
            (2, 1): {0: [("g1", -1, 1)], 1: [("e1", -1, 1)]},
            (2, 2): {0: [("h1", -1, 4), ("h2", 1, 2), ("h3", 1, 4)]},
            (2, 3): {0: [("g2", 1, 1)], -1: [("e2", 1, 1)]},
            (2, 4): {0: [("f2", 1, 1)], -1: [("f4", 1, 1)]},
            (3, 1): {0: [("f1", 1, 1)], 1: [("f3", 1, 1)]},
            (3, 2): {0: [("g2", -1, 1)], 1: [("e2", -1, 1)]},
            (3, 3): {0: [("h1", -1, 4), ("h2", -1, 2), ("h3", 1, 4)]},
            (3, 4): {0: [("g3", 1, 1)], -1: [("e3", 1, 1)]},
            (4, 1): {0: [("e4", 1, 1)], 1: [("g4", 1, 1)]},
            (4, 2): {0: [("f2", 1, 1)], 1: [("f4", 1, 1)]},
            (4, 3): {0: [("g3", -1, 1)], 1: [("e3", -1, 1)]},
            (4, 4): {0: [("h1", -1, 4), ("h2", -1, 2), ("h3", -3, 4)]},
        }
    else:
        raise ValueError("explicit generating matrices exist for ranks 3 and 4 only")
    entries = {}
    for (i, j), by_exp in layout.items():
        entry = {}
        for e, items in by_exp.items():
            el = t.zero()
            for name, num, den in items:
                el.add_term(t.index[name], Fraction(2 * num, den))
            entry[e] = el
        entries[(i, j)] = entry
    return AWMatrix(rank, aw_denominator(rank), entries)


def _aw_num_matrix(b: AWMatrix, zero_elem) -> GeneratorMatrix:
    out = GeneratorMatrix(b.rank, 1)
    for e in (-1, 0, 1):
        mat = [[zero_elem() for _ in range(b.rank)] for _ in range(b.rank)]
        seen = False
        for (i, j), entry in b.entries.items():
            if e in entry and not entry[e].is_zero():
                mat[i - 1][j - 1] = entry[e]
                seen = True
        if seen:
            out.coeffs[e] = mat
    return out


def _x_times_den(rank: int, v: str) -> SpectralLaurent:
    return SpectralLaurent.variable(v) * aw_denominator(rank, v).rename({"x": v})


def reflection_aw_mismatch(t: StructTable, b: AWMatrix):
    """Exact reflection residual for a finite generating matrix, or None."""
    rank = b.rank
    clearing, r12c, r21c = cleared_rbar_pair(rank)
    x = SpectralLaurent.variable("x")
    y = SpectralLaurent.variable("y")
    num = _aw_num_matrix(b, t.zero)
    lhs = BiSeries.bracket_cross(num, num, t.bracket)
    lhs = lhs.convolve(clearing * x * y, "x", "y")
    b1 = BiSeries.from_leg(num, 1, 0).convolve(x, "x", "y")
    b2 = BiSeries.from_leg(num, 2, 1).convolve(y, "x", "y")
    xdx = _x_times_den(rank, "x")
    ydy = _x_times_den(rank, "y")
    term1 = (-b1.commutator_scalar(r21c, "x", "y")).convolve(ydy, "x", "y")
    term2 = b2.commutator_scalar(r12c, "x", "y").convolve(xdx, "x", "y")
    return lhs.first_mismatch(term1 + term2, 10 ** 9)


def check_reflection_aw(t: StructTable, b: AWMatrix) -> Report:
    report = Report("verify aw-reflection", {"n": b.rank})
    with timer(report):
        mism = reflection_aw_mismatch(t, b)
        detail = None
        if mism is not None:
            a, bb, rd, cd, diff = mism
            detail = f"monomial x^{a} y^{bb} entry {rd}->{cd} residual {diff}"
        report.add("reflection-exact", mism is None, detail)
        bad = None
        for e in (-1, 0, 1):
            tr = t.zero()
            for i in range(1, b.rank + 1):
                entry = b.entry(i, i)
                if e in entry:
                    tr = tr + entry[e]
            if not tr.is_zero():
                bad = f"x^{e}: trace {tr}"
                break
        report.add("tracelessness", bad is None, bad)
    return report


# -- presentation checks ---------------------------------------------------------


def check_pro1(t: StructTable) -> Report:
    """Nested-commutator presentation of the rank-3 quotient."""
    report = Report("verify aw-presentation", {"n": 3})
    with timer(report):
        e = [t.unit(f"e{i}") for i in range(1, 4)]

        def br(u, v):
            return t.bracket(u, v)

        checks = [
            ("f1 = [e2,e3]", t.unit("f1") - br(e[1], e[2])),
            ("f2 = [e3,e1]", t.unit("f2") - br(e[2], e[0])),
            ("f3 = [e1,e2]", t.unit("f3") - br(e[0], e[1])),
            ("g1 = [e1,[e2,e3]]", t.unit("g1") - br(e[0], br(e[1], e[2]))),
            ("g2 = [e2,[e3,e1]]", t.unit("g2") - br(e[1], br(e[2], e[0]))),
        ]
        bad = next(((n, r) for n, r in checks if not r.is_zero()), None)
        report.add("generator-expressions", bad is None,
                   bad and f"{bad[0]} residual {bad[1]}")
        bad = None
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                r = br(e[i], br(e[i], e[j])) - e[j]
                if not r.is_zero():
                    bad = f"[e{i+1},[e{i+1},e{j+1}]] - e{j+1} = {r}"
                    break
        report.add("double-bracket-relations", bad is None, bad)
        bad = None
        for i, j, k in itertools.permutations((1, 2, 3)):
            r = (br(br(e[i-1], e[j-1]), br(e[j-1], e[k-1]))
                 + br(e[i-1], e[k-1])
                 + e[j-1].scale(ALPHA * _eps3(i, j, k)))
            if not r.is_zero():
                bad = f"cubic relation at ({i},{j},{k}): {r}"
                break
        report.add("cubic-relations", bad is None, bad)
        bad = None
        for i, j, k in itertools.permutations((1, 2, 3)):
            r = (br(e[i-1], br(e[j-1], br(e[k-1], e[i-1])))
                 - e[i-1].scale(ALPHA * _eps3(i, j, k))
                 + br(e[j-1], e[k-1]).scale(2))
            if not r.is_zero():
                bad = f"alternative relation at ({i},{j},{k}): {r}"
                break
        report.add("alternative-cubic-relations", bad is None, bad)
        # depth-3 generation: iterated brackets of e1,e2,e3 span all 8 dims
        vectors = [e[i].coeffs for i in range(3)]
        for i in range(3):
            for j in range(3):
                vectors.append(br(e[i], e[j]).coeffs)
                for k in range(3):
                    vectors.append(br(e[i], br(e[j], e[k])).coeffs)
        rank = matrix_rank(vectors)
        report.add(f"depth-3 generation rank {rank}/8", rank == 8,
                   None if rank == 8 else "span deficient")
    return report


def check_pro2(t: StructTable) -> Report:
    """Nested-commutator presentation of the rank-4 quotient, indices mod 4."""
    report = Report("verify aw-presentation", {"n": 4})
    with timer(report):
        def e(i):
            return t.unit(f"e{(i - 1) % 4 + 1}")

        def br(u, v):
            return t.bracket(u, v)

        bad = None
        for i in range(1, 5):
            for off, r in (
                (None, br(e(i), br(e(i), e(i + 1))) - e(i + 1)),
                (None, br(e(i), br(e(i), e(i - 1))) - e(i - 1)),
                (None, br(e(i), e(i + 2))),
                (None, br(br(e(i), e(i + 1)), br(e(i + 1), e(i + 2)))),
            ):
                if not r.is_zero():
                    bad = f"relation at i={i}: residual {r}"
                    break
            if bad:
                break
        report.add("quadratic-and-quartic-relations", bad is None, bad)
        bad = None
        for i in range(1, 5):
            w = br(e(i), br(e(i + 1), e(i + 2)))
            r = (br(br(e(i), e(i + 1)), br(e(i + 1), br(e(i + 2), e(i + 3))))
                 + e(i + 1).scale(ALPHA)
                 + br(e(i), br(e(i + 2), e(i + 3))))
            if not r.is_zero():
                bad = f"mixed relation at i={i}: {r}"
                break
            r2 = (br(w, br(e(i + 3), w))
                  + e(i + 3).scale(4)
                  - w.scale(ALPHA * 2))
            if not r2.is_zero():
                bad = f"deep relation at i={i}: {r2}"
                break
        report.add("quintic-relations", bad is None, bad)
    return report


# -- the general-rank ansatz and structure-constant extraction -------------------


class WordElement(SymbolCombination):
    """Linear combination of nested-commutator words."""

    __slots__ = ()

    @staticmethod
    def symbol_str(sym) -> str:
        return str(sym)


def build_B_general(rank: int, convention: str = "literal") -> dict:
    """Entries of the general-N ansatz as {(i,j) -> {exp -> WordElement}}.

    The only supported index convention wraps subscripts modulo N into
    1..N; signs use the literal integer differences of the entry position.
    """
    if rank < 3:
        raise ValueError("the word ansatz needs N >= 3")
    if convention != "literal":
        raise ValueError(f"unknown convention {convention!r}")
    n = rank
    sgn_n = parity_sign(n)

    def w(i, j):
        return cyclic_word(i, j, n)

    def el(pairs):
        out = WordElement(n, {})
        for word, c in pairs:
            out.add_term(word, c)
        return out

    entries: dict = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            entry: dict = {}
            if i == j:
                diag = []
                for l in range(1, n):
                    c = Fraction(n - l, n) if i <= l else Fraction(-l, n)
                    diag.append((w(l, l - 1), c))
                entry[0] = el(diag)
            elif (i, j) == (1, n):
                entry[0] = el([(Word((n,)), Fraction(parity_sign(n + 1)))])
                entry[-1] = el([(w(1, n - 1), Fraction(1))])
            elif (i, j) == (n, 1):
                entry[0] = el([(Word((n,)), Fraction(1))])
                entry[1] = el([(w(1, n - 1), Fraction(-1))])
            elif j - i == 1:
                entry[0] = el([(w(i + 1, i - 1), Fraction(-sgn_n))])
                entry[-1] = el([(Word((i,)), Fraction(sgn_n))])
            elif i - j == 1:
                entry[0] = el([(w(j + 1, j - 1), Fraction(sgn_n))])
                entry[1] = el([(Word((j,)), Fraction(-1))])
            elif i < j:
                s = parity_sign((j - i) * (n + 1))
                entry[0] = el([(w(j, i - 1), Fraction(s))])
                entry[-1] = el([(w(i, j - 1), Fraction(s * parity_sign(j - i)))])
            else:
                s = parity_sign((i - j) * n)
                entry[0] = el([(w(i, j - 1), Fraction(s))])
                entry[1] = el([(w(j, i - 1), Fraction(s * parity_sign((i - j) + n)))])
            entries[(i, j)] = {e: v.scale(2) for e, v in entry.items()}
    return entries


def ansatz_words(rank: int, convention: str = "literal") -> list:
    """Distinct words of the ansatz in a deterministic order."""
    entries = build_B_general(rank, convention)
    seen = set()
    for (i, j) in sorted(entries):
        for e in sorted(entries[(i, j)]):
            for word in entries[(i, j)][e].coeffs:
                seen.add(word)
    return sorted(seen, key=lambda w: (len(w.letters), w.letters))


def extract_structure_constants(rank: int, convention: str = "literal"):
    """Solve the reflection relation for all brackets of the ansatz words.

    Returns (StructTable or None, Report).  The report records the
    convention, system shape, solvability, and the Jacobi certificate of
    the extracted table.
    """
    report = Report("extract aw", {"n": rank, "convention": convention})
    with timer(report):
        words = ansatz_words(rank, convention)
        widx = {w: k for k, w in enumerate(words)}
        entries = build_B_general(rank, convention)
        clearing, r12c, r21c = cleared_rbar_pair(rank)
        x = SpectralLaurent.variable("x")
        y = SpectralLaurent.variable("y")

        num = GeneratorMatrix(rank, 1)
        for e in (-1, 0, 1):
            mat = [[WordElement(rank, {}) for _ in range(rank)] for _ in range(rank)]
            seen = False
            for (i, j), entry in entries.items():
                if e in entry and not entry[e].is_zero():
                    mat[i - 1][j - 1] = entry[e]
                    seen = True
            if seen:
                num.coeffs[e] = mat

        # right-hand side: linear in the words
        b1 = BiSeries.from_leg(num, 1, 0).convolve(x, "x", "y")
        b2 = BiSeries.from_leg(num, 2, 1).convolve(y, "x", "y")
        xdx = _x_times_den(rank, "x")
        ydy = _x_times_den(rank, "y")
        rhs = (-b1.commutator_scalar(r21c, "x", "y")).convolve(ydy, "x", "y") \
            + b2.commutator_scalar(r12c, "x", "y").convolve(xdx, "x", "y")

        # left-hand side: bilinear in unknown brackets of word pairs
        from .series import laurent_xy_terms

        scal = laurent_xy_terms(clearing * x * y, "x", "y")
        npairs = 0
        elim = SparseEliminator()
        rows = 0
        for i in range(1, rank + 1):
            for k in range(1, rank + 1):
                for j in range(1, rank + 1):
                    for l in range(1, rank + 1):
                        lhs_grid: dict = {}
                        for a, ua in entries[(i, j)].items():
                            for b, ub in entries[(k, l)].items():
                                for wa, ca in ua.coeffs.items():
                                    for wb, cb in ub.coeffs.items():
                                        if wa == wb:
                                            continue
                                        pair = (widx[wa], widx[wb])
                                        sign = 1
                                        if pair[0] > pair[1]:
                                            pair = (pair[1], pair[0])
                                            sign = -1
                                        c = ca * cb * sign
                                        for ex, ey, sc in scal:
                                            key = (a + ex, b + ey)
                                            row = lhs_grid.setdefault(key, {})
                                            cur = row.get(pair, ParamPoly.zero()) + c * sc
                                            if cur.is_zero():
                                                row.pop(pair, None)
                                            else:
                                                row[pair] = cur
                        key_rc = ((i - 1) * rank + (k - 1), (j - 1) * rank + (l - 1))
                        rhs_ser = rhs.data.get(key_rc, {})
                        for mkey in sorted(set(lhs_grid) | set(rhs_ser)):
                            coeffs = lhs_grid.get(mkey, {})
                            rvec = rhs_ser.get(mkey)
                            rdict = {}
                            if rvec is not None:
                                rdict = {widx[w]: c for w, c in rvec.coeffs.items()}
                            elim.add_row(dict(coeffs), rdict)
                            rows += 1
        all_pairs = [(a, b) for a in range(len(words)) for b in range(a + 1, len(words))]
        npairs = len(all_pairs)
        result = elim.solve(all_pairs)
        report.add(
            f"system: {rows} rows, {npairs} bracket unknowns, rank {elim.rank()}",
            True,
        )
        report.add("consistency", not result.inconsistent,
                   result.inconsistent and f"{len(result.inconsistent)} irreducible residual equations")
        det = not result.free_cols and not result.entangled
        report.add("all brackets determined", det,
                   None if det else f"free: {result.free_cols} entangled: {result.entangled}")
        sols, trouble = solve_polynomial(result)
        report.add("polynomial structure constants", not trouble,
                   trouble and f"non-polynomial at {trouble[:3]}")
        if result.inconsistent or not det or trouble:
            return None, report

        basis = [str(w) for w in words]
        gen_indices = [widx[Word((i,))] for i in range(1, rank + 1)]
        tbl = StructTable(rank, basis, gen_indices,
                          [(Fraction(1), w) for w in words])
        for (a, b), vec in sols.items():
            tbl.set_bracket(a, b, vec)
        jac = check_jacobi(tbl, label=f"extracted-jacobi rank {rank}")
        report.extend(jac)
        closed = all(c.status == "pass" for c in jac.checks)
        report.add("closes on the word span (finite-dimensional)", closed)
        return tbl, report


def match_tables(a: StructTable, b: StructTable) -> Report:
    """Search for a sign-graded isomorphism a -> b.

    Generators map to generators up to sign; composite basis elements map
    through their defining words.  Reports the map or the obstruction.
    """
    report = Report("match aw-tables", {"dim": a.dim})
    with timer(report):
        if a.dim != b.dim:
            report.add("dimension", False, f"{a.dim} vs {b.dim}")
            return report
        ngen = len(a.gen_indices)
        found = None
        reason = None
        for signs in itertools.product((1, -1), repeat=ngen):
            gens = [b.generator(i + 1).scale(signs[i]) for i in range(ngen)]
            images = []
            ok = True
            for k in range(a.dim):
                wk = a.words[k]
                if wk is None:
                    ok = False
                    reason = f"basis {a.basis[k]} has no defining word"
                    break
                coeff, word = wk
                images.append(b.eval_word(word, gens).scale(coeff))
            if not ok:
                break
            if matrix_rank([im.coeffs for im in images]) != a.dim:
                reason = "images not linearly independent"
                continue
            hom = True
            for ia in range(a.dim):
                for ib in range(ia + 1, a.dim):
                    lhs = b.zero()
                    for ic, c in a.bracket_basis(ia, ib).items():
                        lhs = lhs + images[ic].scale(c)
                    rhs = b.bracket(images[ia], images[ib])
                    if not (lhs - rhs).is_zero():
                        hom = False
                        reason = (
                            f"bracket ({a.basis[ia]},{a.basis[ib]}) "
                            f"not preserved under signs {signs}"
                        )
                        break
                if not hom:
                    break
            if hom:
                found = signs
                break
        report.add(
            "isomorphism found" if found else "isomorphism",
            found is not None,
            None if found else reason,
        )
        if found:
            report.add(f"generator signs {found}", True)
    return report


# -- export / import --------------------------------------------------------------


def export_table(t: StructTable) -> dict:
    brackets = []
    for (ia, ib) in sorted(t.table):
        vec = t.table[(ia, ib)]
        brackets.append([
            t.basis[ia],
            t.basis[ib],
            [[t.basis[ic], str(vec[ic])] for ic in sorted(vec)],
        ])
    return {
        "rank": t.rank,
        "basis": list(t.basis),
        "parameters": ["alpha"],
        "generators": [t.basis[k] for k in t.gen_indices],
        "words": [
            None if w is None else [str(w[0]), list(w[1].letters)]
            for w in t.words
        ],
        "brackets": brackets,
    }


def import_table(data: dict) -> StructTable:
    words = []
    for w in data["words"]:
        if w is None:
            words.append(None)
        else:
            words.append((Fraction(w[0]), Word(tuple(w[1]))))
    t = StructTable(
        data["rank"],
        data["basis"],
        [data["basis"].index(g) for g in data["generators"]],
        words,
    )
    for name_a, name_b, vec in data["brackets"]:
        t.set_bracket(
            t.index[name_a],
            t.index[name_b],
            {t.index[nc]: parse_param_poly(cs) for nc, cs in vec},
        )
    return t


def check_aw(rank: int) -> Report:
    """The full explicit-table suite for ranks 3 and 4."""
    report = Report("verify aw", {"n": rank})
    with timer(report):
        t = aw3_table() if rank == 3 else aw4_table()
        report.extend(check_jacobi(t))
        report.extend(check_reflection_aw(t, build_B_aw(rank)))
        report.extend(check_pro1(t) if rank == 3 else check_pro2(t))
    return report
