"""Shared base for sparse linear combinations of basis symbols.

Both the affine loop algebra and the Onsager algebra represent elements
as a sparse map from canonical basis symbols to ParamPoly coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import ParamPoly


def as_coeff(value) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.const(value)


class SymbolCombination:
    """Sparse map symbol -> ParamPoly over a rank-N algebra."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict | None = None):
        self.dim = dim
        self.coeffs = coeffs if coeffs is not None else {}

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError(f"rank mismatch: N={self.dim} vs N={other.dim}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for sym, c in other.coeffs.items():
            if sym in out:
                s = out[sym] + c
                if s.is_zero():
                    del out[sym]
                else:
                    out[sym] = s
            else:
                out[sym] = c
        return type(self)(self.dim, out)

    def __neg__(self):
        return type(self)(self.dim, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        f = as_coeff(factor)
        if f.is_zero():
            return type(self)(self.dim, {})
        out = {}
        for sym, c in self.coeffs.items():
            p = c * f
            if not p.is_zero():
                out[sym] = p
        return type(self)(self.dim, out)

    def add_term(self, sym, coeff) -> None:
        """In-place accumulation while an element is being assembled."""
        c = as_coeff(coeff)
        if c.is_zero():
            return
        cur = self.coeffs.get(sym)
        if cur is None:
            self.coeffs[sym] = c
        else:
            s = cur + c
            if s.is_zero():
                del self.coeffs[sym]
            else:
                self.coeffs[sym] = s

    def __eq__(self, other):
        if not isinstance(other, SymbolCombination):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def coefficient(self, sym) -> ParamPoly:
        return self.coeffs.get(sym, ParamPoly.zero())

    @staticmethod
    def symbol_str(sym) -> str:
        return repr(sym)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for sym in sorted(self.coeffs):
            c = self.coeffs[sym]
            if c == 1:
                parts.append(self.symbol_str(sym))
                continue
            if c == -1:
                parts.append(f"-{self.symbol_str(sym)}")
                continue
            cs = str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]):
                cs = f"({cs})"
            parts.append(f"{cs}*{self.symbol_str(sym)}")
        return " + ".join(parts)

    __repr__ = __str__


Scalar = (int, Fraction, ParamPoly)
