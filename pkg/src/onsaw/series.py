"""Series-valued matrices over tensor legs.

``GeneratorMatrix`` is an N x N matrix of Lie-algebra elements per
spectral exponent (a truncated generating series).  ``BiSeries`` is the
two-leg, two-variable object obtained from products and brackets of two
generator matrices living on different legs; its entries are maps
(x-exponent, y-exponent) -> element.

Both containers are agnostic about the element type: anything with
__add__, __sub__, .scale(ParamPoly) and .is_zero() works (LoopElement
and OnsagerElement both do).
"""

from __future__ import annotations

from .exactnum import SpectralLaurent
from .report import mono_str


class GeneratorMatrix:
    """Map spectral exponent -> dense N x N matrix of Lie elements."""

    __slots__ = ("dim", "cutoff", "coeffs")

    def __init__(self, dim: int, cutoff: int, coeffs: dict | None = None):
        self.dim = dim
        self.cutoff = cutoff
        self.coeffs = coeffs if coeffs is not None else {}

    def matrix(self, exp: int):
        return self.coeffs.get(exp)

    def entry(self, exp: int, i: int, j: int):
        """1-based matrix indices."""
        m = self.coeffs.get(exp)
        return None if m is None else m[i - 1][j - 1]

    def exponents(self):
        return sorted(self.coeffs)

    def map_entries(self, fn) -> "GeneratorMatrix":
        out = {}
        for e, m in self.coeffs.items():
            out[e] = [[fn(v) for v in row] for row in m]
        return GeneratorMatrix(self.dim, self.cutoff, out)

    def __add__(self, other: "GeneratorMatrix") -> "GeneratorMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = {e: [list(row) for row in m] for e, m in self.coeffs.items()}
        for e, m in other.coeffs.items():
            if e in out:
                t = out[e]
                for i in range(self.dim):
                    for j in range(self.dim):
                        t[i][j] = t[i][j] + m[i][j]
            else:
                out[e] = [list(row) for row in m]
        return GeneratorMatrix(self.dim, max(self.cutoff, other.cutoff), out)

    def shift_scale(self, fn_exp, fn_coeff=None) -> "GeneratorMatrix":
        """Remap exponents (and optionally scale coefficients per exponent)."""
        out = {}
        for e, m in self.coeffs.items():
            ne = fn_exp(e)
            mat = m
            if fn_coeff is not None:
                s = fn_coeff(e)
                mat = [[v.scale(s) for v in row] for row in m]
            out[ne] = [list(row) for row in mat]
        return GeneratorMatrix(self.dim, self.cutoff, out)

    def transpose(self) -> "GeneratorMatrix":
        out = {}
        for e, m in self.coeffs.items():
            out[e] = [[m[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return GeneratorMatrix(self.dim, self.cutoff, out)

    def first_mismatch(self, other: "GeneratorMatrix", window=None):
        """Compare coefficient-wise; returns (exp, i, j, left, right) or None."""
        exps = set(self.coeffs) | set(other.coeffs)
        for e in sorted(exps):
            if window is not None and not (window[0] <= e <= window[1]):
                continue
            for i in range(self.dim):
                for j in range(self.dim):
                    a = self.entry(e, i + 1, j + 1)
                    b = other.entry(e, i + 1, j + 1)
                    if a is None and b is None:
                        continue
                    if a is None:
                        if not b.is_zero():
                            return (e, i + 1, j + 1, a, b)
                    elif b is None:
                        if not a.is_zero():
                            return (e, i + 1, j + 1, a, b)
                    elif not (a - b).is_zero():
                        return (e, i + 1, j + 1, a, b)
        return None


def laurent_xy_terms(p: SpectralLaurent, xv: str, yv: str):
    """Flatten a two-variable Laurent polynomial into (ex, ey, coeff) triples."""
    out = []
    for mono, coeff in p.terms.items():
        d = dict(mono)
        extra = set(d) - {xv, yv}
        if extra:
            raise ValueError(f"unexpected variables {sorted(extra)}")
        out.append((d.get(xv, 0), d.get(yv, 0), coeff))
    return out


class BiSeries:
    """Two-leg matrix with entries that are (a, b) -> element series maps."""

    __slots__ = ("dim", "data")

    def __init__(self, dim: int, data: dict | None = None):
        self.dim = dim
        self.data = data if data is not None else {}

    # composite index helpers: leg digits are 1-based
    def idx(self, d1: int, d2: int) -> int:
        return (d1 - 1) * self.dim + (d2 - 1)

    def digits(self, idx: int):
        return (idx // self.dim + 1, idx % self.dim + 1)

    def _acc(self, key, exps, elem) -> None:
        if elem.is_zero():
            return
        ser = self.data.setdefault(key, {})
        cur = ser.get(exps)
        s = elem if cur is None else cur + elem
        if s.is_zero():
            ser.pop(exps, None)
            if not ser:
                del self.data[key]
        else:
            ser[exps] = s

    # -- constructors -----------------------------------------------------

    @classmethod
    def bracket_cross(cls, gx: GeneratorMatrix, gy: GeneratorMatrix, bracket_fn) -> "BiSeries":
        """[X_1(x), Y_2(y)] for X, Y on distinct legs: entries are brackets."""
        n = gx.dim
        out = cls(n)
        for a, mx in gx.coeffs.items():
            for b, my in gy.coeffs.items():
                for i in range(n):
                    for j in range(n):
                        xe = mx[i][j]
                        if xe.is_zero():
                            continue
                        for k in range(n):
                            for l in range(n):
                                ye = my[k][l]
                                if ye.is_zero():
                                    continue
                                br = bracket_fn(xe, ye)
                                if not br.is_zero():
                                    out._acc(
                                        (out.idx(i + 1, k + 1), out.idx(j + 1, l + 1)),
                                        (a, b),
                                        br,
                                    )
        return out

    @classmethod
    def from_leg(cls, gm: GeneratorMatrix, leg: int, slot: int) -> "BiSeries":
        """Embed a generator matrix on leg 1 or 2; slot picks the exponent slot."""
        n = gm.dim
        out = cls(n)
        for e, m in gm.coeffs.items():
            exps = (e, 0) if slot == 0 else (0, e)
            for i in range(n):
                for j in range(n):
                    v = m[i][j]
                    if v.is_zero():
                        continue
                    for k in range(1, n + 1):
                        if leg == 1:
                            key = (out.idx(i + 1, k), out.idx(j + 1, k))
                        else:
                            key = (out.idx(k, i + 1), out.idx(k, j + 1))
                        out._acc(key, exps, v)
        return out

    @classmethod
    def from_scalar(cls, dim: int, scal: dict, xv: str, yv: str, elem) -> "BiSeries":
        """Scalar two-leg matrix times a fixed Lie element."""
        out = cls(dim)
        for (r, c), lau in scal.items():
            for ex, ey, coeff in laurent_xy_terms(lau, xv, yv):
                out._acc((r, c), (ex, ey), elem.scale(coeff))
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "BiSeries") -> "BiSeries":
        out = BiSeries(self.dim, {k: dict(v) for k, v in self.data.items()})
        for key, ser in other.data.items():
            for exps, elem in ser.items():
                out._acc(key, exps, elem)
        return out

    def __neg__(self) -> "BiSeries":
        return BiSeries(
            self.dim,
            {k: {e: v.scale(-1) for e, v in ser.items()} for k, ser in self.data.items()},
        )

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def convolve(self, lau: SpectralLaurent, xv: str, yv: str) -> "BiSeries":
        """Multiply every entry by a scalar Laurent polynomial in (x, y)."""
        terms = laurent_xy_terms(lau, xv, yv)
        out = BiSeries(self.dim)
        for key, ser in self.data.items():
            for (a, b), elem in ser.items():
                for ex, ey, coeff in terms:
                    out._acc(key, (a + ex, b + ey), elem.scale(coeff))
        return out

    def mul_scalar(self, scal: dict, xv: str, yv: str, side: str) -> "BiSeries":
        """Matrix product with a scalar two-leg matrix on the given side.

        ``scal`` maps (row, col) composite indices to Laurent polynomials.
        side "right" computes self @ scal, side "left" computes scal @ self.
        """
        out = BiSeries(self.dim)
        flat = {(r, c): laurent_xy_terms(v, xv, yv) for (r, c), v in scal.items()}
        if side == "right":
            by_row: dict = {}
            for (r, c), terms in flat.items():
                by_row.setdefault(r, []).append((c, terms))
            for (i, k), ser in self.data.items():
                for c, terms in by_row.get(k, ()):  # k is self's column
                    for (a, b), elem in ser.items():
                        for ex, ey, coeff in terms:
                            out._acc((i, c), (a + ex, b + ey), elem.scale(coeff))
        elif side == "left":
            by_col: dict = {}
            for (r, c), terms in flat.items():
                by_col.setdefault(c, []).append((r, terms))
            for (k, j), ser in self.data.items():
                for r, terms in by_col.get(k, ()):  # k is self's row
                    for (a, b), elem in ser.items():
                        for ex, ey, coeff in terms:
                            out._acc((r, j), (a + ex, b + ey), elem.scale(coeff))
        else:
            raise ValueError("side must be 'left' or 'right'")
        return out

    def commutator_scalar(self, scal: dict, xv: str, yv: str) -> "BiSeries":
        """[self, scal] = self @ scal - scal @ self."""
        return self.mul_scalar(scal, xv, yv, "right") - self.mul_scalar(scal, xv, yv, "left")

    # -- comparison ---------------------------------------------------------

    def first_mismatch(self, other: "BiSeries", window: int):
        """First differing coefficient with max(|a|,|b|) <= window.

        Returns (a, b, row digits, col digits, difference) or None;
        iteration order is deterministic.
        """
        keys = set(self.data) | set(other.data)
        found = []
        for key in keys:
            sa = self.data.get(key, {})
            sb = other.data.get(key, {})
            for exps in set(sa) | set(sb):
                a, b = exps
                if max(abs(a), abs(b)) > window:
                    continue
                ea = sa.get(exps)
                eb = sb.get(exps)
                if ea is None:
                    diff = eb
                elif eb is None:
                    diff = ea
                else:
                    diff = ea - eb
                if diff is not None and not diff.is_zero():
                    found.append((a, b, key, diff))
        if not found:
            return None
        a, b, key, diff = min(found, key=lambda t: (t[0], t[1], t[2]))
        return (a, b, self.digits(key[0]), self.digits(key[1]), diff)


def shift_bound(laurents, names) -> int:
    """Worst per-variable exponent magnitude over a family of multipliers."""
    bound = 0
    for p in laurents:
        for v in names:
            bound = max(bound, p.degree(v), -p.min_degree(v))
    return bound


def mismatch_detail(mism) -> str:
    a, b, rd, cd, diff = mism
    return f"monomial {mono_str((('x', a), ('y', b)))} entry {rd}->{cd} residual {diff}"
