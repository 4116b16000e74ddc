"""Exact scalar arithmetic underlying every other module.

Three layers, all exact and immutable:

  * ``Fraction`` (stdlib) is the ground field of rationals,
  * ``ParamPoly`` -- sparse multivariate polynomials in named formal
    parameters (alpha, mu_i, kappa_ij, ...) over Fraction,
  * ``SpectralLaurent`` -- sparse Laurent polynomials in spectral
    variables (x, y, x1, ...) with ParamPoly coefficients,
  * ``RationalFn`` -- unreduced num/den pairs of Laurent polynomials;
    equality is decided by cross multiplication, never by gcd.

The parameter ``eps`` is involutive: every monomial reduces eps-exponents
mod 2, so an identity verified with symbolic eps holds for eps = +1 and
eps = -1 simultaneously.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

# names whose square is 1; exponents are reduced mod 2 on every monomial
INVOLUTIVE = frozenset({"eps"})

# monomial: sorted tuple of (name, exponent) pairs, exponents nonzero
Monomial = tuple


class AlphabetError(ValueError):
    """Raised when operands were declared over incompatible variable sets."""


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def _join_vars(a: frozenset, b: frozenset) -> frozenset:
    # declared alphabets accumulate; the strict same-alphabet contract is
    # enforced by poly_arith, the entry point that takes caller-level operands
    if a == b:
        return a
    if not a:
        return b
    if not b:
        return a
    return a | b


def _mono_normal(pairs) -> Monomial:
    out = []
    for name, exp in pairs:
        if name in INVOLUTIVE:
            exp %= 2
        if exp:
            out.append((name, exp))
    out.sort()
    return tuple(out)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    m = dict(a)
    for name, exp in b:
        m[name] = m.get(name, 0) + exp
    return _mono_normal(m.items())


class ParamPoly:
    """Sparse polynomial in named formal parameters with Fraction coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: frozenset, terms: dict):
        self.vars = vars
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value, vars: frozenset = frozenset()) -> "ParamPoly":
        q = Fraction(value)
        return cls(vars, {(): q} if q else {})

    @classmethod
    def variable(cls, name: str) -> "ParamPoly":
        return cls(frozenset({name}), {((name, 1),): Fraction(1)})

    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls(frozenset(), {})

    @classmethod
    def one(cls) -> "ParamPoly":
        return cls(frozenset(), {(): Fraction(1)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"not a constant: {self}")
        return self.terms[()]

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vars_ = _join_vars(self.vars, other.vars)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return ParamPoly(vars_, terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vars_ = _join_vars(self.vars, other.vars)
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                s = terms.get(m, Fraction(0)) + ca * cb
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return ParamPoly(vars_, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = ParamPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    # -- exact division ----------------------------------------------------

    def exact_div(self, den: "ParamPoly") -> "ParamPoly":
        """Divide by ``den`` exactly; raise ExactDivisionError on remainder."""
        if den.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if den.is_const():
            q = den.terms[()]
            return ParamPoly(self.vars, {m: c / q for m, c in self.terms.items()})
        allvars = sorted({n for m in self.terms for n, _ in m}
                         | {n for m in den.terms for n, _ in m})

        def key(mono):
            d = dict(mono)
            return tuple(d.get(v, 0) for v in allvars)

        rem = dict(self.terms)
        quot: dict = {}
        lt_den = max(den.terms, key=key)
        c_den = den.terms[lt_den]
        d_den = dict(lt_den)
        while rem:
            lt = max(rem, key=key)
            d = dict(lt)
            qm = {}
            for name in set(d) | set(d_den):
                e = d.get(name, 0) - d_den.get(name, 0)
                if e < 0:
                    raise ExactDivisionError("inexact polynomial division")
                if e:
                    qm[name] = e
            qmono = _mono_normal(qm.items())
            qc = rem[lt] / c_den
            quot[qmono] = quot.get(qmono, Fraction(0)) + qc
            for m, c in den.terms.items():
                mm = _mono_mul(qmono, m)
                s = rem.get(mm, Fraction(0)) - qc * c
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return ParamPoly(self.vars, {m: c for m, c in quot.items() if c})

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        return render_terms(self.terms, star="*")

    __repr__ = __str__


def render_terms(terms: dict, star: str = "*") -> str:
    """Canonical deterministic rendering of a monomial->Fraction map."""
    if not terms:
        return "0"
    chunks = []
    for mono in sorted(terms):
        c = terms[mono]
        body = star.join(
            f"{name}^{exp}" if exp != 1 else name for name, exp in mono
        )
        if body:
            if c == 1:
                piece = body
            elif c == -1:
                piece = f"-{body}"
            else:
                piece = f"{c}{star}{body}"
        else:
            piece = str(c)
        if chunks and not piece.startswith("-"):
            chunks.append("+" + piece)
        else:
            chunks.append(piece)
    return "".join(chunks)


def parse_param_poly(text: str, vars: frozenset = frozenset()) -> ParamPoly:
    """Parse the canonical rendering produced by ``ParamPoly.__str__``."""
    text = text.strip()
    if text == "0":
        return ParamPoly(vars, {})
    import re

    terms: dict = {}
    names = set()
    for piece in re.findall(r"[+-]?[^+-]+", text.replace(" ", "")):
        sign = Fraction(1)
        if piece.startswith("+"):
            piece = piece[1:]
        elif piece.startswith("-"):
            sign = Fraction(-1)
            piece = piece[1:]
        coeff = Fraction(1)
        mono = []
        for factor in piece.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
            else:
                m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(-?\d+))?", factor)
                if not m:
                    raise ValueError(f"cannot parse term factor {factor!r}")
                mono.append((m.group(1), int(m.group(2) or 1)))
                names.add(m.group(1))
        key = _mono_normal(mono)
        c = terms.get(key, Fraction(0)) + sign * coeff
        if c:
            terms[key] = c
        else:
            terms.pop(key, None)
    return ParamPoly(vars | frozenset(names), terms)


class SpectralLaurent:
    """Sparse Laurent polynomial in spectral variables over ParamPoly."""

    __slots__ = ("svars", "terms")

    def __init__(self, svars: frozenset, terms: dict):
        self.svars = svars
        self.terms = terms  # Monomial (int exponents, any sign) -> ParamPoly

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value, svars: frozenset = frozenset()) -> "SpectralLaurent":
        if isinstance(value, ParamPoly):
            p = value
        else:
            p = ParamPoly.const(value)
        return cls(svars, {(): p} if not p.is_zero() else {})

    @classmethod
    def variable(cls, name: str, exp: int = 1) -> "SpectralLaurent":
        if exp == 0:
            return cls.const(1, frozenset({name}))
        return cls(frozenset({name}), {((name, exp),): ParamPoly.one()})

    @classmethod
    def monomial(cls, coeff, powers: dict) -> "SpectralLaurent":
        p = coeff if isinstance(coeff, ParamPoly) else ParamPoly.const(coeff)
        if p.is_zero():
            return cls(frozenset(powers), {})
        key = tuple(sorted((n, e) for n, e in powers.items() if e))
        return cls(frozenset(powers), {key: p})

    @classmethod
    def zero(cls) -> "SpectralLaurent":
        return cls(frozenset(), {})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and () in self.terms and self.terms[()] == 1

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "SpectralLaurent":
        if isinstance(other, SpectralLaurent):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return SpectralLaurent.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        svars = _join_vars(self.svars, other.svars)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                s = terms[m] + c
                if s.is_zero():
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return SpectralLaurent(svars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SpectralLaurent(self.svars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        svars = _join_vars(self.svars, other.svars)
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma and mb:
                    m = dict(ma)
                    for name, exp in mb:
                        e = m.get(name, 0) + exp
                        if e:
                            m[name] = e
                        else:
                            del m[name]
                    key = tuple(sorted(m.items()))
                else:
                    key = ma or mb
                c = ca * cb
                if key in terms:
                    s = terms[key] + c
                    if s.is_zero():
                        del terms[key]
                    else:
                        terms[key] = s
                elif not c.is_zero():
                    terms[key] = c
        return SpectralLaurent(svars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use RationalFn for negative powers")
        out = SpectralLaurent.const(1, self.svars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    # -- calculus and substitution ------------------------------------------

    def derivative(self, var: str) -> "SpectralLaurent":
        terms: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            key = tuple(sorted(d.items()))
            s = terms.get(key)
            val = c * e
            terms[key] = val if s is None else s + val
        return SpectralLaurent(self.svars, {m: c for m, c in terms.items() if not c.is_zero()})

    def substitute(self, var: str, sign: int, powers: dict) -> "SpectralLaurent":
        """Map ``var -> sign * prod(name**e for name, e in powers)`` exactly.

        Only monomial images (with an overall sign) are supported.
        """
        if var not in self.svars:
            raise AlphabetError(f"variable {var!r} not declared in {sorted(self.svars)}")
        if sign not in (1, -1):
            raise ValueError("image sign must be +1 or -1")
        svars = (self.svars - {var}) | frozenset(powers)
        terms: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(var, 0)
            if e:
                for name, p in powers.items():
                    ne = d.get(name, 0) + e * p
                    if ne:
                        d[name] = ne
                    else:
                        d.pop(name, None)
                if sign == -1 and e % 2:
                    c = -c
            key = tuple(sorted(d.items()))
            if key in terms:
                s = terms[key] + c
                if s.is_zero():
                    del terms[key]
                else:
                    terms[key] = s
            else:
                terms[key] = c
        return SpectralLaurent(svars, terms)

    def rename(self, mapping: dict) -> "SpectralLaurent":
        """Bijective renaming of spectral variables."""
        svars = frozenset(mapping.get(v, v) for v in self.svars)
        terms = {}
        for m, c in self.terms.items():
            key = tuple(sorted((mapping.get(n, n), e) for n, e in m))
            terms[key] = c
        return SpectralLaurent(svars, terms)

    def degree(self, var: str) -> int:
        """Maximum exponent of ``var`` (0 for the zero polynomial)."""
        best = 0
        for m in self.terms:
            for name, e in m:
                if name == var and e > best:
                    best = e
        return best

    def min_degree(self, var: str) -> int:
        best = 0
        for m in self.terms:
            e = dict(m).get(var, 0)
            if e < best:
                best = e
        return best

    def coefficient(self, powers: dict) -> ParamPoly:
        key = tuple(sorted((n, e) for n, e in powers.items() if e))
        return self.terms.get(key, ParamPoly.zero())

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            body = "*".join(f"{n}^{e}" if e != 1 else n for n, e in mono)
            if body and c == 1:
                piece = body
            elif body and c == -1:
                piece = f"-{body}"
            else:
                cs = str(c)
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = f"({cs})"
                piece = f"{cs}*{body}" if body else cs
            if chunks and not piece.startswith("-"):
                chunks.append("+" + piece)
            else:
                chunks.append(piece)
        return "".join(chunks)

    __repr__ = __str__


def _true_min_degree(p: SpectralLaurent, var: str) -> int:
    """Minimum exponent of ``var`` over the support (may be positive)."""
    best = None
    for m in p.terms:
        e = dict(m).get(var, 0)
        best = e if best is None else min(best, e)
    return best or 0


def laurent_exact_div(num: SpectralLaurent, den: SpectralLaurent) -> SpectralLaurent:
    """Exact division in the Laurent ring (monomials are units)."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if num.is_zero():
        return SpectralLaurent(num.svars, {})
    # shift both operands into the polynomial cone, divide there, shift back
    allvars = sorted(num.svars | den.svars)
    shift_n = {v: -_true_min_degree(num, v) for v in allvars}
    shift_d = {v: -_true_min_degree(den, v) for v in allvars}
    a = _shift(num, shift_n)
    b = _shift(den, shift_d)

    def okey(mono):
        d = dict(mono)
        return tuple(d.get(v, 0) for v in allvars)

    rem = dict(a.terms)
    quot: dict = {}
    lt_b = max(b.terms, key=okey)
    c_b = b.terms[lt_b]
    d_b = dict(lt_b)
    while rem:
        lt = max(rem, key=okey)
        d = dict(lt)
        qm = {}
        for name in set(d) | set(d_b):
            e = d.get(name, 0) - d_b.get(name, 0)
            if e < 0:
                raise ExactDivisionError("inexact Laurent division")
            if e:
                qm[name] = e
        qc = rem[lt].exact_div(c_b)
        key = tuple(sorted(qm.items()))
        quot[key] = quot.get(key, ParamPoly.zero()) + qc
        for m, c in b.terms.items():
            mm = dict(m)
            for name, e in qm.items():
                mm[name] = mm.get(name, 0) + e
            kk = tuple(sorted((n, e) for n, e in mm.items() if e))
            s = rem.get(kk, ParamPoly.zero()) - qc * c
            if s.is_zero():
                rem.pop(kk, None)
            else:
                rem[kk] = s
    q = SpectralLaurent(num.svars | den.svars, {m: c for m, c in quot.items() if not c.is_zero()})
    back = {v: shift_d[v] - shift_n[v] for v in allvars}
    return _shift(q, back)


def _shift(p: SpectralLaurent, by: dict) -> SpectralLaurent:
    terms = {}
    for m, c in p.terms.items():
        d = dict(m)
        for name, e in by.items():
            ne = d.get(name, 0) + e
            if ne:
                d[name] = ne
            else:
                d.pop(name, None)
        terms[tuple(sorted(d.items()))] = c
    return SpectralLaurent(p.svars, terms)


class RationalFn:
    """Unreduced quotient of two Laurent polynomials; den is never zero."""

    __slots__ = ("num", "den")

    def __init__(self, num: SpectralLaurent, den: SpectralLaurent | None = None):
        if den is None:
            den = SpectralLaurent.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def of(cls, value) -> "RationalFn":
        if isinstance(value, RationalFn):
            return value
        if isinstance(value, SpectralLaurent):
            return cls(value)
        return cls(SpectralLaurent.const(value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = RationalFn.of(other)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFn.of(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RationalFn.of(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = RationalFn.of(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __ne__(self, other):
        return not self.__eq__(other)

    def derivative(self, var: str) -> "RationalFn":
        """Quotient-rule derivative with respect to a spectral variable."""
        return RationalFn(
            self.num.derivative(var) * self.den - self.num * self.den.derivative(var),
            self.den * self.den,
        )

    def substitute(self, var: str, sign: int, powers: dict) -> "RationalFn":
        return RationalFn(
            self.num.substitute(var, sign, powers),
            self.den.substitute(var, sign, powers),
        )

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def laurent_derivative(f: RationalFn, var: str) -> RationalFn:
    """Module-level alias for the quotient-rule derivative."""
    return RationalFn.of(f).derivative(var)


def poly_arith(a, b, op: str):
    """Arithmetic with the strict configuration contract.

    Both operands must be the same kind (ParamPoly or SpectralLaurent) and
    be declared over identical alphabets; anything else is a configuration
    error.  op is one of "add", "sub", "mul".
    """
    if type(a) is not type(b):
        raise AlphabetError(f"operand kinds differ: {type(a).__name__} vs {type(b).__name__}")
    if isinstance(a, ParamPoly):
        if a.vars != b.vars:
            raise AlphabetError(f"alphabet mismatch: {sorted(a.vars)} vs {sorted(b.vars)}")
    elif isinstance(a, SpectralLaurent):
        if a.svars != b.svars:
            raise AlphabetError(f"alphabet mismatch: {sorted(a.svars)} vs {sorted(b.svars)}")
    else:
        raise TypeError(f"unsupported operand type {type(a).__name__}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
