"""Bracket tables, exact reflection certificates, presentations, and the
structure-constant extraction."""

import json
from fractions import Fraction

import pytest

from onsaw import askey_wilson as aw
from onsaw.exactnum import ParamPoly

ALPHA = ParamPoly.variable("alpha")


def test_aw3_bracket_samples():
    t = aw.aw3_table()
    # [e1, e2] = f3
    assert (t.bracket(t.unit("e1"), t.unit("e2")) - t.unit("f3")).is_zero()
    # [e1, f1] = g1
    assert (t.bracket(t.unit("e1"), t.unit("f1")) - t.unit("g1")).is_zero()
    # [e1, g1] = -2 alpha e1 + 4 f1
    got = t.bracket(t.unit("e1"), t.unit("g1"))
    want = t.unit("e1").scale(ALPHA * -2) + t.unit("f1").scale(4)
    assert (got - want).is_zero()
    # dependent symbol: [e3, f3] = g3 = -g1 - g2
    got = t.bracket(t.unit("e3"), t.unit("f3"))
    want = t.unit("g1").scale(-1) + t.unit("g2").scale(-1)
    assert (got - want).is_zero()


def test_aw4_bracket_samples():
    t = aw.aw4_table()
    assert (t.bracket(t.unit("e1"), t.unit("e2")) - t.unit("f3")).is_zero()
    assert t.bracket(t.unit("e1"), t.unit("e3")).is_zero()
    # [f3, f1] = h1 + h2 through the h4 resolution
    got = t.bracket(t.unit("f3"), t.unit("f1"))
    want = t.unit("h1") + t.unit("h2")
    assert (got - want).is_zero()
    assert t.bracket(t.unit("h1"), t.unit("h3")).is_zero()


def test_jacobi():
    assert aw.check_jacobi(aw.aw3_table()).ok()
    assert aw.check_jacobi(aw.aw4_table()).ok()


def test_jacobi_negative_control():
    # dropping the alpha term of the f-f bracket breaks the Jacobi identity
    t = aw.aw3_table()
    for key in list(t.table):
        ia, ib = key
        if t.basis[ia].startswith("f") and t.basis[ib].startswith("f"):
            t.table[key] = {
                k: v for k, v in t.table[key].items() if t.basis[k].startswith("f")
            }
    rep = aw.check_jacobi(t)
    assert not rep.ok()
    assert rep.failures()[0].detail  # locator present


def test_B_matrix_entries():
    b3 = aw.build_B_aw(3)
    t3 = aw.aw3_table()
    want = t3.unit("g1").scale(Fraction(4, 3)) + t3.unit("g2").scale(Fraction(2, 3))
    assert ((b3.entry(1, 1)[0]) - want).is_zero()
    entry21 = b3.entry(2, 1)
    assert (entry21[1] - t3.unit("e1").scale(-2)).is_zero()
    assert (entry21[0] - t3.unit("f1").scale(-2)).is_zero()
    b4 = aw.build_B_aw(4)
    t4 = aw.aw4_table()
    entry14 = b4.entry(1, 4)
    assert (entry14[0] - t4.unit("e4").scale(-2)).is_zero()
    assert (entry14[-1] - t4.unit("g4").scale(-2)).is_zero()


def test_reflection_exact():
    rep = aw.check_reflection_aw(aw.aw3_table(), aw.build_B_aw(3))
    assert rep.ok(), [c.detail for c in rep.failures()]
    rep = aw.check_reflection_aw(aw.aw4_table(), aw.build_B_aw(4))
    assert rep.ok(), [c.detail for c in rep.failures()]


def test_reflection_negative_control():
    # corrupting a sign in the f-g bracket family must fail with a locator
    t = aw.aw3_table()
    key = (t.index["f1"], t.index["g1"])
    t.table[key] = {k: -v for k, v in t.table[key].items()}
    mism = aw.reflection_aw_mismatch(t, aw.build_B_aw(3))
    assert mism is not None


def test_pro1():
    rep = aw.check_pro1(aw.aw3_table())
    assert rep.ok(), [c.detail for c in rep.failures()]


def test_pro1_word_evaluations():
    t = aw.aw3_table()
    # [e1, [e2, e3]] = g1
    got = t.eval_word(aw.Word((1, 2, 3)))
    assert (got - t.unit("g1")).is_zero()
    # [[e1,e2],[e2,e3]] + [e1,e3] + alpha eps_123 e2 = 0
    lhs = t.bracket(t.bracket(t.unit("e1"), t.unit("e2")),
                    t.bracket(t.unit("e2"), t.unit("e3")))
    lhs = lhs + t.bracket(t.unit("e1"), t.unit("e3")) + t.unit("e2").scale(ALPHA)
    assert lhs.is_zero()


def test_pro2():
    rep = aw.check_pro2(aw.aw4_table())
    assert rep.ok(), [c.detail for c in rep.failures()]


def test_pro2_sample_evaluation():
    t = aw.aw4_table()
    w = t.bracket(t.unit("e1"), t.bracket(t.unit("e2"), t.unit("e3")))
    lhs = t.bracket(w, t.bracket(t.unit("e4"), w))
    want = t.unit("e4").scale(-4) + w.scale(ALPHA * 2)
    assert (lhs - want).is_zero()


def test_general_ansatz_specializes_to_explicit_matrices():
    # rank 3: the word entries evaluate to the explicit entries
    t = aw.aw3_table()
    entries = aw.build_B_general(3)
    b = aw.build_B_aw(3)
    for (i, j), entry in entries.items():
        for e, wel in entry.items():
            got = t.zero()
            for word, c in wel.coeffs.items():
                got = got + t.eval_word(word).scale(c)
            want = b.entry(i, j).get(e, t.zero())
            assert (got - want).is_zero(), (i, j, e)


def test_general_ansatz_rank4():
    t = aw.aw4_table()
    entries = aw.build_B_general(4)
    b = aw.build_B_aw(4)
    for (i, j), entry in entries.items():
        for e, wel in entry.items():
            got = t.zero()
            for word, c in wel.coeffs.items():
                got = got + t.eval_word(word).scale(c)
            want = b.entry(i, j).get(e, t.zero())
            assert (got - want).is_zero(), (i, j, e)


def test_ansatz_word_counts():
    assert len(aw.ansatz_words(3)) == 8
    assert len(aw.ansatz_words(4)) == 15
    assert len(aw.ansatz_words(5)) == 24


def test_extraction_rank3_matches():
    tbl, rep = aw.extract_structure_constants(3)
    assert rep.ok(), [c.detail for c in rep.failures()]
    assert tbl is not None
    m = aw.match_tables(tbl, aw.aw3_table())
    assert m.ok(), [c.detail for c in m.failures()]


def test_extraction_rank4_matches():
    tbl, rep = aw.extract_structure_constants(4)
    assert rep.ok()
    m = aw.match_tables(tbl, aw.aw4_table())
    assert m.ok(), [c.detail for c in m.failures()]


def test_match_identity_and_sign_twist():
    t = aw.aw3_table()
    assert aw.match_tables(t, t).ok()
    # flip e1 in a copied table: the matcher must find the sign bookkeeping
    flipped = aw.aw3_table()
    e1 = flipped.index["e1"]
    for key in list(flipped.table):
        vec = flipped.table[key]
        s = (-1 if e1 in key else 1)
        flipped.table[key] = {
            k: (v * (s * (-1 if k == e1 else 1))) for k, v in vec.items()
        }
    rep = aw.match_tables(t, flipped)
    assert rep.ok(), [c.detail for c in rep.failures()]
    signs = [c.name for c in rep.checks if c.name.startswith("generator signs")]
    assert signs and "-1" in signs[0]


def test_export_import_roundtrip(tmp_path):
    tbl, _ = aw.extract_structure_constants(3)
    data = aw.export_table(tbl)
    path = tmp_path / "table.json"
    path.write_text(json.dumps(data))
    back = aw.import_table(json.loads(path.read_text()))
    assert back.basis == tbl.basis
    assert back.table.keys() == tbl.table.keys()
    for key in tbl.table:
        assert back.table[key] == tbl.table[key]
    # byte-exact on re-export
    assert json.dumps(aw.export_table(back)) == json.dumps(data)


def test_unknown_convention_rejected():
    with pytest.raises(ValueError):
        aw.build_B_general(4, convention="mirror")
