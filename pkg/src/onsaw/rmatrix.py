"""Classical r-matrix machinery on tensor legs.

``TensorOperator`` is a sparse N^k x N^k matrix of rational functions,
stored as Laurent-polynomial numerators over one shared master
denominator.  Identity checks clear that denominator and test numerators
for identical vanishing, so no gcd or division is ever needed.

Contents: the rational r-matrix r(x/y) of type A, its folded non-standard
partner rbar(x,y), leg embedding / transposition / partial trace, and the
exact residual checks for skew-symmetry, the classical Yang-Baxter
equation, and its non-standard variant.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import RationalFn, SpectralLaurent, laurent_exact_div
from .report import Check, Report, mono_str, timer


def _sl(value, svars=frozenset()) -> SpectralLaurent:
    return SpectralLaurent.const(value, svars)


def var(name: str, exp: int = 1) -> SpectralLaurent:
    return SpectralLaurent.variable(name, exp)


class TensorOperator:
    """Sparse matrix over k tensor legs with a shared master denominator."""

    __slots__ = ("legs", "dim", "den", "rows")

    def __init__(self, legs: int, dim: int, den: SpectralLaurent | None = None, rows=None):
        self.legs = legs
        self.dim = dim
        self.den = den if den is not None else _sl(1)
        self.rows = rows if rows is not None else {}

    # -- indexing ------------------------------------------------------------

    def size(self) -> int:
        return self.dim ** self.legs

    def digits(self, idx: int) -> tuple:
        """Composite index -> 1-based digit per leg."""
        out = []
        for _ in range(self.legs):
            out.append(idx % self.dim + 1)
            idx //= self.dim
        return tuple(reversed(out))

    def index(self, digits) -> int:
        idx = 0
        for d in digits:
            idx = idx * self.dim + (d - 1)
        return idx

    # -- construction ----------------------------------------------------------

    def put(self, row_digits, col_digits, num: SpectralLaurent) -> None:
        if num.is_zero():
            return
        r = self.index(row_digits)
        c = self.index(col_digits)
        row = self.rows.setdefault(r, {})
        cur = row.get(c)
        s = num if cur is None else cur + num
        if s.is_zero():
            row.pop(c, None)
            if not row:
                del self.rows[r]
        else:
            row[c] = s

    def entry(self, row_digits, col_digits) -> RationalFn:
        r = self.index(row_digits)
        c = self.index(col_digits)
        num = self.rows.get(r, {}).get(c, SpectralLaurent.zero())
        return RationalFn(num, self.den)

    def with_entry(self, row_digits, col_digits, value: RationalFn) -> "TensorOperator":
        """Copy with one entry replaced (used to build corrupted controls)."""
        out = self.copy()
        r = out.index(row_digits)
        c = out.index(col_digits)
        num = value.num * laurent_exact_div(out.den, value.den)
        row = out.rows.setdefault(r, {})
        if num.is_zero():
            row.pop(c, None)
        else:
            row[c] = num
        if not row:
            out.rows.pop(r, None)
        return out

    def copy(self) -> "TensorOperator":
        return TensorOperator(
            self.legs, self.dim, self.den,
            {r: dict(row) for r, row in self.rows.items()},
        )

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        if (self.legs, self.dim) != (other.legs, other.dim):
            raise ValueError("operator shape mismatch")
        if self.den == other.den:
            out = self.copy()
            for r, row in other.rows.items():
                for c, v in row.items():
                    _acc(out.rows, r, c, v)
            return out
        out = TensorOperator(self.legs, self.dim, self.den * other.den)
        for r, row in self.rows.items():
            for c, v in row.items():
                _acc(out.rows, r, c, v * other.den)
        for r, row in other.rows.items():
            for c, v in row.items():
                _acc(out.rows, r, c, v * self.den)
        return out

    def __neg__(self) -> "TensorOperator":
        return TensorOperator(
            self.legs, self.dim, self.den,
            {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()},
        )

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        return self + (-other)

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        if (self.legs, self.dim) != (other.legs, other.dim):
            raise ValueError("operator shape mismatch")
        out = TensorOperator(self.legs, self.dim, self.den * other.den)
        for r, row in self.rows.items():
            for k, v in row.items():
                brow = other.rows.get(k)
                if not brow:
                    continue
                for c, w in brow.items():
                    _acc(out.rows, r, c, v * w)
        return out

    def commutator(self, other: "TensorOperator") -> "TensorOperator":
        ab = self @ other
        ba = other @ self
        # both products share the same master denominator
        for r, row in ba.rows.items():
            for c, v in row.items():
                _acc(ab.rows, r, c, -v)
        return ab

    def scale(self, factor) -> "TensorOperator":
        f = factor if isinstance(factor, SpectralLaurent) else _sl(factor)
        if f.is_zero():
            return TensorOperator(self.legs, self.dim, self.den)
        return TensorOperator(
            self.legs, self.dim, self.den,
            {r: {c: v * f for c, v in row.items()} for r, row in self.rows.items()},
        )

    def map_entries(self, fn) -> "TensorOperator":
        out = TensorOperator(self.legs, self.dim, self.den)
        for r, row in self.rows.items():
            for c, v in row.items():
                w = fn(self.digits(r), self.digits(c), v)
                if not w.is_zero():
                    out.rows.setdefault(r, {})[c] = w
        return out

    # -- leg calculus ------------------------------------------------------------

    def embed_legs(self, placement, total: int) -> "TensorOperator":
        """Place this k-leg operator on the given legs of a total-leg space.

        ``placement`` is an ordered tuple of distinct 1-based leg indices;
        order matters: placement (2, 1) of a 2-leg operator is the
        leg-swapped operator.
        """
        if len(placement) != self.legs:
            raise ValueError("placement length must equal the leg count")
        if len(set(placement)) != len(placement):
            raise ValueError("duplicate leg indices in placement")
        if any(not (1 <= p <= total) for p in placement):
            raise ValueError("placement outside target legs")
        free = [p for p in range(1, total + 1) if p not in placement]
        out = TensorOperator(total, self.dim, self.den)
        n = self.dim
        free_assignments = [[]]
        for _ in free:
            free_assignments = [a + [d] for a in free_assignments for d in range(1, n + 1)]
        for r, row in self.rows.items():
            rd = self.digits(r)
            for c, v in row.items():
                cd = self.digits(c)
                for assign in free_assignments:
                    row_d = [0] * total
                    col_d = [0] * total
                    for pos, p in enumerate(placement):
                        row_d[p - 1] = rd[pos]
                        col_d[p - 1] = cd[pos]
                    for pos, p in enumerate(free):
                        row_d[p - 1] = assign[pos]
                        col_d[p - 1] = assign[pos]
                    out.put(row_d, col_d, v)
        return out

    def transpose_leg(self, leg: int) -> "TensorOperator":
        if not (1 <= leg <= self.legs):
            raise ValueError(f"leg {leg} out of range")
        out = TensorOperator(self.legs, self.dim, self.den)
        for r, row in self.rows.items():
            rd = list(self.digits(r))
            for c, v in row.items():
                cd = list(self.digits(c))
                rd2 = list(rd)
                rd2[leg - 1], cd[leg - 1] = cd[leg - 1], rd2[leg - 1]
                out.put(rd2, cd, v)
        return out

    def partial_trace(self, leg: int) -> "TensorOperator":
        if not (1 <= leg <= self.legs):
            raise ValueError(f"leg {leg} out of range")
        if self.legs == 1:
            raise ValueError("cannot trace the last remaining leg")
        out = TensorOperator(self.legs - 1, self.dim, self.den)
        for r, row in self.rows.items():
            rd = self.digits(r)
            for c, v in row.items():
                cd = self.digits(c)
                if rd[leg - 1] != cd[leg - 1]:
                    continue
                nrd = rd[: leg - 1] + rd[leg:]
                ncd = cd[: leg - 1] + cd[leg:]
                out.put(nrd, ncd, v)
        return out

    def trace(self) -> RationalFn:
        num = SpectralLaurent.zero()
        for r, row in self.rows.items():
            v = row.get(r)
            if v is not None:
                num = num + v
        return RationalFn(num, self.den)

    def scale_leg_diag(self, leg: int, signs, side: str) -> "TensorOperator":
        """Multiply by a diagonal matrix diag(signs) on one leg.

        side "left" scales by the row digit, "right" by the column digit;
        conjugation by the diagonal is left followed by right-inverse,
        which for sign matrices is left then right.
        """
        out = TensorOperator(self.legs, self.dim, self.den)
        for r, row in self.rows.items():
            rd = self.digits(r)
            for c, v in row.items():
                cd = self.digits(c)
                d = rd[leg - 1] if side == "left" else cd[leg - 1]
                s = signs[d - 1]
                out.put(rd, cd, v if s == 1 else v * s)
        return out

    def derivative(self, var_name: str) -> "TensorOperator":
        """Entrywise quotient-rule derivative; master denominator squares."""
        d = self.den
        dp = d.derivative(var_name)
        return TensorOperator(
            self.legs, self.dim, d * d,
            {r: {c: v.derivative(var_name) * d - v * dp for c, v in row.items()}
             for r, row in self.rows.items()},
        )

    def substitute(self, var_name: str, sign: int, powers: dict) -> "TensorOperator":
        def sub(p: SpectralLaurent) -> SpectralLaurent:
            return p.substitute(var_name, sign, powers) if var_name in p.svars else p

        return TensorOperator(
            self.legs, self.dim,
            sub(self.den),
            {r: {c: sub(v) for c, v in row.items()} for r, row in self.rows.items()},
        )

    def rename_vars(self, mapping: dict) -> "TensorOperator":
        return TensorOperator(
            self.legs, self.dim, self.den.rename(mapping),
            {r: {c: v.rename(mapping) for c, v in row.items()}
             for r, row in self.rows.items()},
        )

    # -- residual inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.rows.values() for v in row.values())

    def first_nonzero(self):
        """Deterministic locator: (row digits, col digits, leading monomial, coeff)."""
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                v = row[c]
                if not v.is_zero():
                    mono = min(v.terms)
                    return (self.digits(r), self.digits(c), mono, v.terms[mono])
        return None

    def cleared(self, clearing: SpectralLaurent) -> dict:
        """Entries times clearing/den as plain Laurent polynomials.

        The clearing polynomial must be a multiple of the master
        denominator (up to a Laurent monomial unit).
        """
        mult = laurent_exact_div(clearing, self.den)
        out = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                w = v * mult
                if not w.is_zero():
                    out[(r, c)] = w
        return out


def _acc(rows: dict, r: int, c: int, v: SpectralLaurent) -> None:
    row = rows.setdefault(r, {})
    cur = row.get(c)
    s = v if cur is None else cur + v
    if s.is_zero():
        row.pop(c, None)
        if not row:
            del rows[r]
    else:
        row[c] = s


def parity_sign(n: int) -> int:
    return -1 if n % 2 else 1


# -- the type A rational r-matrix ---------------------------------------------


def build_r(dim: int, xv: str = "x", yv: str = "y") -> TensorOperator:
    """r(x/y) cleared to rational functions of (x, y), master denominator y - x.

    Diagonal weight (y+x)/(y-x) on E_ii (x) E_ii minus (1/N) on the identity,
    2y/(y-x) above the diagonal and 2x/(y-x) below.
    """
    if dim < 2:
        raise ValueError("need N >= 2")
    svars = frozenset({xv, yv})
    x = var(xv)
    y = var(yv)
    op = TensorOperator(2, dim, y - x)
    w = y + x
    for i in range(1, dim + 1):
        for k in range(1, dim + 1):
            c = Fraction(-1, dim) + (1 if i == k else 0)
            if c:
                op.put((i, k), (i, k), w * c)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i < j:
                op.put((i, j), (j, i), y * 2)
            elif i > j:
                op.put((i, j), (j, i), x * 2)
    return op


def build_r_single(dim: int, zv: str = "z") -> TensorOperator:
    """r(z) in one spectral variable, master denominator 1 - z."""
    if dim < 2:
        raise ValueError("need N >= 2")
    z = var(zv)
    op = TensorOperator(2, dim, _sl(1) - z)
    w = _sl(1) + z
    for i in range(1, dim + 1):
        for k in range(1, dim + 1):
            c = Fraction(-1, dim) + (1 if i == k else 0)
            if c:
                op.put((i, k), (i, k), w * c)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i < j:
                op.put((i, j), (j, i), _sl(2))
            elif i > j:
                op.put((i, j), (j, i), z * 2)
    return op


def u_signs(dim: int) -> list:
    """Diagonal of U = sum_j (-1)^j E_jj."""
    return [parity_sign(j) for j in range(1, dim + 1)]


def build_rbar_folded(dim: int, xv: str = "x", yv: str = "y") -> TensorOperator:
    """rbar(x,y) = r(x/y) + U_1 r^{t1}((-1)^N/(x y)) U_1^{-1}."""
    sigma = parity_sign(dim)
    base = build_r(dim, xv, yv)
    folded = build_r_single(dim, "_z").transpose_leg(1)
    folded = folded.substitute("_z", sigma, {xv: -1, yv: -1})
    signs = u_signs(dim)
    folded = folded.scale_leg_diag(1, signs, "left").scale_leg_diag(1, signs, "right")
    return base + folded


def build_rbar(dim: int, xv: str = "x", yv: str = "y") -> tuple:
    """Both realizations of the folded r-matrix: (folded, closed form).

    The closed form carries master denominator (x - y)(x y - (-1)^N).
    """
    if dim < 2:
        raise ValueError("need N >= 2")
    sigma = parity_sign(dim)
    x = var(xv)
    y = var(yv)
    xy = x * y
    dxy = x - y
    dprod = xy - _sl(sigma)
    op = TensorOperator(2, dim, dxy * dprod)
    # -((x+y)/(x-y) + (xy+s)/(s-xy)) = -(x+y)/(x-y) + (xy+s)/(xy-s)
    weight = (xy + sigma) * dxy - (x + y) * dprod
    for i in range(1, dim + 1):
        for k in range(1, dim + 1):
            c = Fraction(-1, dim) + (1 if i == k else 0)
            if c:
                op.put((i, k), (i, k), weight * c)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i == j:
                continue
            if i < j:
                op.put((i, j), (j, i), y * dprod * -2)
            else:
                op.put((i, j), (j, i), x * dprod * -2)
            s = parity_sign(i + j)
            if i < j:
                op.put((j, j), (i, i), xy * dxy * (2 * s))
            else:
                op.put((j, j), (i, i), dxy * (2 * s * sigma))
    return build_rbar_folded(dim, xv, yv), op


def rbar_closed(dim: int, xv: str = "x", yv: str = "y") -> TensorOperator:
    return build_rbar(dim, xv, yv)[1]


def cleared_rbar_pair(dim: int) -> tuple:
    """(clearing, rbar_12(x,y), rbar_21(y,x)), the latter two as cleared
    Laurent-polynomial entry maps over the clearing (x-y)(xy-(-1)^N)."""
    sigma = parity_sign(dim)
    x = var("x")
    y = var("y")
    clearing = (x - y) * (x * y - _sl(sigma))
    r12 = rbar_closed(dim, "x", "y").cleared(clearing)
    r21 = rbar_closed(dim, "y", "x").embed_legs((2, 1), 2).cleared(clearing)
    return clearing, r12, r21


# -- residuals and reports ------------------------------------------------------


def skew_residual(dim: int, r12=None) -> TensorOperator:
    """r_12(x/y) + r_21(y/x); zero iff the r-matrix is skew-symmetric."""
    if r12 is None:
        r12 = build_r(dim, "x", "y")
    r21 = build_r(dim, "y", "x").embed_legs((2, 1), 2)
    return r12 + r21


def cybe_residual(r13: TensorOperator, r23: TensorOperator, r12: TensorOperator) -> TensorOperator:
    return r13.commutator(r23) - (r13 + r23).commutator(r12)


def cybe_operators(dim: int):
    r13 = build_r(dim, "x1", "x3").embed_legs((1, 3), 3)
    r23 = build_r(dim, "x2", "x3").embed_legs((2, 3), 3)
    r12 = build_r(dim, "x1", "x2").embed_legs((1, 2), 3)
    return r13, r23, r12


def ns_cybe_residual(r13, r23, r21, r12) -> TensorOperator:
    return r13.commutator(r23) - r21.commutator(r13) - r23.commutator(r12)


def ns_cybe_operators(dim: int, builder=rbar_closed):
    r13 = builder(dim, "x1", "x3").embed_legs((1, 3), 3)
    r23 = builder(dim, "x2", "x3").embed_legs((2, 3), 3)
    r21 = builder(dim, "x2", "x1").embed_legs((2, 1), 3)
    r12 = builder(dim, "x1", "x2").embed_legs((1, 2), 3)
    return r13, r23, r21, r12


def _residual_check(name: str, residual: TensorOperator) -> Check:
    loc = residual.first_nonzero()
    if loc is None:
        return Check(name, "pass")
    rd, cd, mono, coeff = loc
    detail = f"entry {rd}->{cd} monomial {mono_str(mono)} residual {coeff}"
    return Check(name, "fail", detail)


def check_skew(dim: int) -> Report:
    report = Report("verify skew", {"n": dim})
    with timer(report):
        report.add_check(_residual_check("skew-symmetry", skew_residual(dim)))
    return report


def check_cybe(dim: int) -> Report:
    report = Report("verify cybe", {"n": dim})
    with timer(report):
        report.add_check(_residual_check("cybe", cybe_residual(*cybe_operators(dim))))
    return report


def check_rbar_fold(dim: int) -> Check:
    folded, closed = build_rbar(dim)
    diff = folded - closed
    return _residual_check("rbar-fold-vs-closed", diff)


def check_ns_cybe(dim: int) -> Report:
    report = Report("verify ns-cybe", {"n": dim})
    with timer(report):
        report.add_check(check_rbar_fold(dim))
        report.add_check(
            _residual_check("ns-cybe", ns_cybe_residual(*ns_cybe_operators(dim)))
        )
    return report
