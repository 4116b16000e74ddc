"""Generating matrices, exchange relations, and automorphism checks."""

import pytest

from onsaw import frt
from onsaw import loop_algebra as la
from onsaw.rmatrix import parity_sign


def test_T_plus_entries():
    t = frt.build_T(1, 3, 4)
    want = la.inject(3, 2, 1, 0).scale(2)
    assert (t.entry(0, 1, 2) - want).is_zero()
    for n in range(1, 5):
        assert (t.entry(n, 1, 2) - la.inject(3, 2, 1, n).scale(2)).is_zero()
    # lower-left zero block at exponent 0
    assert t.entry(0, 2, 1).is_zero()
    assert t.entry(0, 3, 1).is_zero()


def test_T_minus_entries():
    t = frt.build_T(-1, 3, 3)
    assert (t.entry(0, 2, 1) - la.inject(3, 1, 2, 0).scale(-2)).is_zero()
    assert t.entry(0, 1, 2).is_zero()
    assert (t.entry(-2, 1, 2) - la.inject(3, 2, 1, -2).scale(-2)).is_zero()


def test_T_traceless():
    for sign in (1, -1):
        t = frt.build_T(sign, 4, 3)
        for e, m in t.coeffs.items():
            tr = la.zero(4)
            for i in range(4):
                tr = tr + m[i][i]
            assert tr.is_zero(), e


def test_theta1_action():
    el = la.unit(3, la.off(1, 2, 1))
    img = frt.apply_theta1(el)
    assert img == la.unit(3, la.off(2, 1, -1)).scale(-1)
    assert frt.apply_theta1(la.central(3)) == la.central(3).scale(-1)


def test_theta1_involution_exhaustive():
    for dim in (2, 3, 4):
        for sym in la.basis_symbols(dim, 3):
            u = la.unit(dim, sym)
            assert (frt.apply_theta1(frt.apply_theta1(u)) - u).is_zero()


def test_theta2_requires_even():
    with pytest.raises(ValueError):
        frt.apply_theta2(la.central(3), 1)


def test_theta2_action_examples():
    # block action with the central shift on the diagonal
    e11 = la.inject(2, 1, 1, 0)
    img = frt.apply_theta2(e11, 1)
    want = la.inject(2, 2, 2, 0).scale(-1) + la.central(2).scale(la.Fraction(1, 2)) \
        if hasattr(la, "Fraction") else None
    from fractions import Fraction

    want = la.inject(2, 2, 2, 0).scale(-1) + la.central(2).scale(Fraction(1, 2))
    assert (img - want).is_zero()
    # off-diagonal block shift: level moves by one
    e12 = la.unit(2, la.off(1, 2, 0))
    img = frt.apply_theta2(e12, 1)
    assert (img - la.unit(2, la.off(1, 2, 1)).scale(-1)).is_zero()


def test_theta2_involution_both_signs():
    for eps in (1, -1, None):
        e = eps if eps is not None else frt.eps_symbol()
        for dim in (2, 4):
            for sym in la.basis_symbols(dim, 2):
                u = la.unit(dim, sym)
                assert (frt.apply_theta2(frt.apply_theta2(u, e), e) - u).is_zero()


def test_automorphism_reports():
    assert frt.check_automorphism("theta1", 3, 3).ok()
    assert frt.check_automorphism("theta2", 4, 2, -1).ok()
    assert frt.check_automorphism("theta2", 2, 3).ok()


def test_theta1_negative_control():
    # wrong sign (-1)^(Nn+i+j) breaks the bracket morphism
    def bad_theta(el):
        dim = el.dim
        out = la.zero(dim)
        for sym, coeff in el.coeffs.items():
            if sym == la.CENTRAL:
                out.add_term(la.CENTRAL, -coeff)
                continue
            for i, j, n, f in la._as_e_terms(dim, sym):
                sgn = parity_sign(dim * n + i + j)
                la._add_e(out, j, i, -n, coeff * (f * sgn))
        return out

    dim = 2
    broken = False
    syms = la.basis_symbols(dim, 1, include_central=False)
    for sa in syms:
        for sb in syms:
            a, b = la.unit(dim, sa), la.unit(dim, sb)
            lhs = bad_theta(la.bracket(a, b))
            rhs = la.bracket(bad_theta(a), bad_theta(b))
            if not (lhs - rhs).is_zero():
                broken = True
    assert broken


def test_theta_matrix_forms():
    assert frt.check_theta_matrix_form("theta1", 2, 5).ok()
    assert frt.check_theta_matrix_form("theta1", 3, 5).ok()
    assert frt.check_theta_matrix_form("theta2", 2, 4, 1).ok()
    assert frt.check_theta_matrix_form("theta2", 2, 4).ok()  # symbolic eps


def test_frt_relations_small():
    rep = frt.check_frt(2, 6)
    assert rep.ok(), [c.detail for c in rep.failures()]


def test_frt_central_term_negative_control():
    mism, window = frt.frt_relation_mismatch(2, 6, 1, -1, include_central=False)
    assert mism is not None
    a, b, rd, cd, diff = mism
    # the surviving residual is the central derivative term
    assert la.CENTRAL in diff.coeffs
    assert a + b == 2  # on the shifted diagonal of the cleared relation


def test_frt_window_guard():
    with pytest.raises(ValueError):
        frt.frt_relation_mismatch(2, 1, 1, -1)
