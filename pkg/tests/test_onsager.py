"""Canonicalization, the embedding oracle, and the B(x) relation checks."""

import pytest

from onsaw import loop_algebra as la
from onsaw import onsager as on
from onsaw.frt import apply_theta1
from onsaw.rmatrix import build_r, parity_sign


def test_canonicalize_examples():
    assert on.canonicalize_B(3, 2, 1, 0) == on.canonicalize_B(3, 1, 2, 0)
    assert on.canonicalize_B(3, 1, 1, 0).is_zero()
    # negative level reflects with the stated sign
    assert on.canonicalize_B(3, 1, 2, -2) == on.OnsagerElement(
        3, {("B", 2, 1, 2): on.la.ParamPoly.one()}
    )
    # diagonal index N eliminates through the trace
    v = on.canonicalize_B(2, 2, 2, 1)
    assert v == on.OnsagerElement(2, {("B", 1, 1, 1): on.la.ParamPoly.const(-1)})


def test_canonicalize_idempotent():
    for dim in (2, 3):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                for n in range(-3, 4):
                    v = on.canonicalize_B(dim, i, j, n)
                    w = on.zero(dim)
                    for sym, c in v.coeffs.items():
                        ii, jj, nn = on._raw(sym)
                        w = w + on.canonicalize_B(dim, ii, jj, nn).scale(c)
                    assert (v - w).is_zero()


def test_embed_examples():
    assert on.embed(on.canonicalize_B(3, 1, 2, 0)) == \
        la.inject(3, 1, 2, 0) + la.inject(3, 2, 1, 0)
    assert on.embed(on.canonicalize_B(3, 1, 3, 0)) == \
        la.inject(3, 1, 3, 0) + la.inject(3, 3, 1, 0).scale(-1)


def test_embed_theta1_fixed():
    for dim in (2, 3, 4):
        for sym in on.onsager_basis(dim, 3):
            im = on.embed_symbol(dim, sym)
            assert (apply_theta1(im) - im).is_zero(), sym


def test_bracket_example_and_oracle():
    a = on.canonicalize_B(3, 1, 2, 0)
    b = on.canonicalize_B(3, 2, 3, 0)
    got = on.bracket_abstract(a, b)
    assert (got - on.canonicalize_B(3, 1, 3, 0)).is_zero()
    assert (on.embed(got) - la.bracket(on.embed(a), on.embed(b))).is_zero()


def test_bracket_antisymmetry():
    import random

    rng = random.Random(3)
    syms = on.onsager_basis(3, 3)
    for _ in range(60):
        sa, sb = rng.choice(syms), rng.choice(syms)
        a = on.OnsagerElement(3, {sa: on.la.ParamPoly.one()})
        b = on.OnsagerElement(3, {sb: on.la.ParamPoly.one()})
        assert (on.bracket_abstract(a, b) + on.bracket_abstract(b, a)).is_zero()


def test_presentation_agreement():
    assert on.check_presentation_agreement(2, 4).ok()
    assert on.check_presentation_agreement(3, 3).ok()


def test_presentation_negative_control():
    # flipping the reflection sign in the defining bracket breaks the oracle
    def bad_bracket(a, b):
        dim = a.dim
        out = on.zero(dim)
        for sa, ca in a.coeffs.items():
            i, j, m = on._raw(sa)
            sgn = -parity_sign(i + j + 1 + m * dim)  # wrong sign
            for sb, cb in b.coeffs.items():
                k, l, n = on._raw(sb)
                c = ca * cb
                if j == k:
                    on._acc_raw(out, i, l, m + n, c)
                if i == l:
                    on._acc_raw(out, k, j, m + n, c * -1)
                if i == k:
                    on._acc_raw(out, j, l, n - m, c * sgn)
                if j == l:
                    on._acc_raw(out, k, i, n - m, c * -sgn)
        return out

    syms = on.onsager_basis(2, 2)
    broken = False
    for sa in syms:
        for sb in syms:
            a = on.OnsagerElement(2, {sa: on.la.ParamPoly.one()})
            b = on.OnsagerElement(2, {sb: on.la.ParamPoly.one()})
            lhs = on.embed(bad_bracket(a, b))
            rhs = la.bracket(on.embed(a), on.embed(b))
            if not (lhs - rhs).is_zero():
                broken = True
    assert broken


def test_ui_relations():
    assert on.check_UI_relations(2, 2).ok()
    rep = on.check_UI_relations(3, 2)
    assert rep.ok(), [c.detail for c in rep.failures()]


def test_ui_specific_example():
    # [G_1^(1), A_13^(1)] = A_13^(2) + A_13^(0) at rank 3
    g = on.canonicalize_B(3, 1, 1, 1) - on.canonicalize_B(3, 2, 2, 1)
    a = on.canonicalize_B(3, 1, 3, 1)
    got = on.bracket_abstract(g, a)
    want = on.canonicalize_B(3, 1, 3, 2) - on.canonicalize_B(3, 1, 3, 0).scale(
        parity_sign(1 * 3)
    )
    assert (got - want).is_zero()


def test_oan_presentation():
    assert on.check_OAn_presentation(3).ok()
    rep = on.check_OAn_presentation(4)
    assert rep.ok(), [c.detail for c in rep.failures()]
    with pytest.raises(ValueError):
        on.check_OAn_presentation(2)


def test_oan_wraparound_generator():
    # the cyclic generator at index N uses a negative-level reflection
    gens = on.oan_generators(4)
    e4 = gens[3]
    assert e4 == on.OnsagerElement(4, {("B", 4, 1, 1): on.la.ParamPoly.one()})
    # [e_4, [e_4, e_1]] = e_1
    got = on.bracket_abstract(e4, on.bracket_abstract(e4, gens[0]))
    assert (got - gens[0]).is_zero()


def test_B_matrix_entries():
    b = on.build_B_matrix(3, 3)
    # no diagonal constants
    for i in range(3):
        assert b.coeffs[0][i][i].is_zero()
    assert (b.coeffs[0][0][1] - on.canonicalize_B(3, 2, 1, 0).scale(2)).is_zero()
    assert (b.coeffs[2][2][0] - on.canonicalize_B(3, 1, 3, 2).scale(2)).is_zero()


def test_Bxg():
    assert on.check_Bxg(2, 5).ok()
    assert on.check_Bxg(3, 5).ok()


def test_reflection():
    rep = on.check_reflection(2, 6)
    assert rep.ok(), [c.detail for c in rep.failures()]
    assert on.check_reflection(3, 5).ok()


def test_reflection_negative_control():
    # the unfolded r-matrix does not satisfy the reflection relation
    from onsaw.exactnum import SpectralLaurent

    x = SpectralLaurent.variable("x")
    y = SpectralLaurent.variable("y")
    sigma = parity_sign(2)
    clearing = (x - y) * (x * y - SpectralLaurent.const(sigma))
    r12 = build_r(2, "x", "y").cleared(clearing)
    r21 = build_r(2, "y", "x").embed_legs((2, 1), 2).cleared(clearing)
    mism, _ = on.reflection_mismatch(2, 6, r12=r12, r21=r21)
    assert mism is not None


def test_currents():
    rep = on.check_currents(2, 6)
    assert rep.ok(), [c.detail for c in rep.failures()]
    assert on.check_currents(3, 4).ok()


def test_current_modes_constant_term_rule():
    modes = on.current_modes(2, 2, 1, 3)
    assert 0 in modes  # i > j keeps the constant
    modes = on.current_modes(2, 1, 2, 3)
    assert 0 not in modes
    modes = on.current_modes(2, 1, 1, 3)
    assert 0 not in modes
