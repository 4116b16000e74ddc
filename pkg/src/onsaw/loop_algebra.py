"""The affine Lie algebra a_{N-1}^(1) as a sparse module over ParamPoly.

Canonical basis symbols:

  * ``CENTRAL``            -- the central element c,
  * ``("e", i, j, n)``     -- off-diagonal e_ij^(n), 1 <= i != j <= N, n in Z,
  * ``("h", i, n)``        -- Cartan h_i^(n) = e_ii^(n) - e_{i+1,i+1}^(n),
                              1 <= i <= N-1.

Diagonal generators are never stored: e_ii^(n) only exists through its
Cartan expansion, so the trace-zero constraint is unrepresentable rather
than merely checked.  The bracket implements

  [e_ij^(m), e_kl^(n)] = d_jk e_il^(m+n) - d_il e_kj^(m+n)
                         + m c d_{m+n,0} (d_il d_jk - d_ij d_kl / N)

bilinearly, with [c, -] = 0.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import ParamPoly
from .symcomb import SymbolCombination

CENTRAL = ("c",)


def off(i: int, j: int, n: int):
    if i == j:
        raise ValueError("off-diagonal symbol needs i != j")
    return ("e", i, j, n)


def cartan(i: int, n: int):
    return ("h", i, n)


class LoopElement(SymbolCombination):
    """Element of a_{N-1}^(1): sparse symbol -> ParamPoly map."""

    __slots__ = ()

    @staticmethod
    def symbol_str(sym) -> str:
        if sym == CENTRAL:
            return "c"
        tag = sym[0]
        if tag == "e":
            return f"e[{sym[1]},{sym[2]}]^({sym[3]})"
        return f"h[{sym[1]}]^({sym[2]})"

    def level_support(self) -> set:
        out = set()
        for sym in self.coeffs:
            if sym == CENTRAL:
                out.add(0)
            else:
                out.add(sym[-1])
        return out


def zero(dim: int) -> LoopElement:
    return LoopElement(dim, {})


def central(dim: int, coeff=1) -> LoopElement:
    el = zero(dim)
    el.add_term(CENTRAL, coeff)
    return el


def _add_e(out: LoopElement, i: int, j: int, n: int, coeff) -> None:
    """Accumulate coeff * e_ij^(n), expanding diagonals into Cartans."""
    if i != j:
        out.add_term(off(i, j, n), coeff)
        return
    dim = out.dim
    for l in range(1, dim):
        w = Fraction(-l, dim) if l < i else Fraction(dim - l, dim)
        out.add_term(cartan(l, n), coeff * w)


def inject(dim: int, i: int, j: int, n: int) -> LoopElement:
    """The generator e_ij^(n) in canonical form (Cartan basis on the diagonal)."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise ValueError(f"index out of range for N={dim}: ({i},{j})")
    out = zero(dim)
    _add_e(out, i, j, n, Fraction(1))
    return out


def _bracket_ee(out: LoopElement, i, j, m, k, l, n, coeff) -> None:
    """Accumulate coeff * [e_ij^(m), e_kl^(n)] into out."""
    dim = out.dim
    if j == k:
        _add_e(out, i, l, m + n, coeff)
    if i == l:
        _add_e(out, k, j, m + n, -coeff)
    if m + n == 0 and m != 0:
        w = Fraction(0)
        if i == l and j == k:
            w += 1
        if i == j and k == l:
            w -= Fraction(1, dim)
        if w:
            out.add_term(CENTRAL, coeff * (m * w))


def _as_e_terms(dim: int, sym):
    """Expand a basis symbol into (i, j, level, Fraction) e-generator terms."""
    tag = sym[0]
    if tag == "e":
        return ((sym[1], sym[2], sym[3], Fraction(1)),)
    i, n = sym[1], sym[2]
    return ((i, i, n, Fraction(1)), (i + 1, i + 1, n, Fraction(-1)))


def bracket(a: LoopElement, b: LoopElement) -> LoopElement:
    if a.dim != b.dim:
        raise ValueError(f"rank mismatch: N={a.dim} vs N={b.dim}")
    out = zero(a.dim)
    for sa, ca in a.coeffs.items():
        if sa == CENTRAL:
            continue
        ta = _as_e_terms(a.dim, sa)
        for sb, cb in b.coeffs.items():
            if sb == CENTRAL:
                continue
            c = ca * cb
            for i, j, m, fa in ta:
                for k, l, n, fb in _as_e_terms(a.dim, sb):
                    _bracket_ee(out, i, j, m, k, l, n, c * (fa * fb))
    return out


def jacobi_residual(a: LoopElement, b: LoopElement, c: LoopElement) -> LoopElement:
    return bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))


def basis_symbols(dim: int, max_level: int, include_central: bool = True):
    """All canonical basis symbols with |level| <= max_level, in a fixed order."""
    syms = []
    if include_central:
        syms.append(CENTRAL)
    for n in range(-max_level, max_level + 1):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                if i != j:
                    syms.append(off(i, j, n))
        for i in range(1, dim):
            syms.append(cartan(i, n))
    return syms


def unit(dim: int, sym) -> LoopElement:
    el = zero(dim)
    el.add_term(sym, 1)
    return el
