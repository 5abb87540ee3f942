"""Symplectic star, operator family, spectra: frozen tables and identities."""

from fractions import Fraction
from random import Random

import pytest

from qdr.exterior import QForm, quantum_wedge, wedge
from qdr.scalars import HPoly
from qdr.symplectic import (
    SymplecticForm,
    apply_A,
    apply_Ah,
    apply_K,
    apply_L,
    apply_Lh,
    apply_Lhstar,
    apply_Lstar,
    bivector_of,
    char_poly,
    contract_bivector,
    decomposition_report,
    det_recursion_check,
    family_ops,
    flat,
    graded_window_basis,
    kstar_op,
    lefschetz_matrix,
    relation_report,
    sharp,
    symplectic_star,
    window_matrix,
)

OM2 = SymplecticForm(2)
OM4 = SymplecticForm(4)
OM6 = SymplecticForm(6)


def blades(dim):
    return [QForm(dim, {m: 1}) for m in range(1 << dim)]


def test_bivector_of_standard():
    assert bivector_of(OM2).entry(1, 2) == -1
    w4 = bivector_of(OM4)
    assert w4.entry(1, 2) == -1 and w4.entry(3, 4) == -1
    assert w4.entry(1, 3) == 0
    assert w4.entry(2, 1) == 1


def test_sharp_flat():
    assert sharp(OM2, QForm.one_form(2, 1)) == {2: Fraction(1)}
    assert sharp(OM2, QForm.one_form(2, 2)) == {1: Fraction(-1)}
    rng = Random(7)
    for _ in range(20):
        om = rng.choice([OM2, OM4, OM6])
        phi = QForm(om.dim, {(rng.randint(1, om.dim),):
                             Fraction(rng.randint(-3, 3))})
        if phi.is_zero():
            continue
        assert flat(om, sharp(om, phi)) == phi


def test_contract_bivector_values():
    w2 = bivector_of(OM2)
    assert contract_bivector(w2, QForm.basis(2, (1, 2))) == \
        QForm.scalar(2, -1)
    for om in (OM2, OM4, OM6):
        w = om.bivector
        assert contract_bivector(w, om.form) == QForm.scalar(om.dim, -om.n)
    om2sq = wedge(OM4.form, OM4.form)
    assert contract_bivector(OM4.bivector, om2sq) == -2 * OM4.form


def test_star_frozen_table_dim2():
    om = OM2.form
    assert symplectic_star(QForm.scalar(2, 1), OM2) == om
    assert symplectic_star(QForm.one_form(2, 1), OM2) == -QForm.one_form(2, 1)
    assert symplectic_star(QForm.one_form(2, 2), OM2) == -QForm.one_form(2, 2)
    assert symplectic_star(om, OM2) == QForm.scalar(2, 1)
    # h flips sign of exponent through the star
    hform = QForm.scalar(2, HPoly({1: 1}))
    assert symplectic_star(hform, OM2) == \
        QForm(2, {(1, 2): HPoly({-1: 1}, laurent=True)}, laurent=True)


def test_star_square_identity():
    for om in (OM2, OM4, OM6):
        for b in blades(om.dim):
            assert symplectic_star(symplectic_star(b, om), om) == b


def test_star_volume():
    assert symplectic_star(QForm.scalar(4, 1), OM4) == OM4.volume
    assert symplectic_star(OM4.volume, OM4) == QForm.scalar(4, 1)


def test_basic_operators():
    assert apply_K(QForm.basis(2, (1, 2))) == 2 * QForm.basis(2, (1, 2))
    for om in (OM2, OM4):
        for b in blades(om.dim):
            assert apply_K(b) == b.blade_degrees()[0] * b if b.terms else True
    assert apply_A(QForm.scalar(4, 1), OM4) == 2 * QForm.scalar(4, 1)
    assert apply_L(QForm.scalar(2, 1), OM2) == OM2.form
    with pytest.raises(ValueError):
        apply_A(QForm.scalar(2, 1) + QForm.one_form(2, 1), OM2)


def test_lefschetz_quantum_frozen():
    om = OM2
    assert apply_Lh(QForm.scalar(2, 1), om) == om.form
    assert apply_Lh(om.form, om) == QForm(
        2, {(1, 2): HPoly({1: 2}), 0: HPoly({2: -1})})
    assert apply_Lh(QForm.one_form(2, 1), om) == \
        QForm(2, {(1,): HPoly({1: 1})})


def test_lhstar_frozen():
    out = apply_Lhstar(QForm.scalar(2, 1), OM2)
    want = QForm(2, {(1, 2): HPoly({-2: 1}, laurent=True),
                     0: HPoly({-1: -2}, laurent=True)}, laurent=True)
    assert out == want
    assert apply_Lhstar(QForm.one_form(2, 1), OM2) == \
        QForm(2, {(1,): HPoly({-1: -1}, laurent=True)}, laurent=True)


def test_ah_counting():
    h1 = QForm.scalar(2, HPoly({1: 1}))
    assert apply_Ah(h1, OM2) == -1 * h1
    assert apply_Ah(QForm.scalar(2, 1), OM2) == QForm.scalar(2, 1)
    assert apply_Ah(QForm.basis(4, (1, 2)), OM4).is_zero()


def test_decomposition_report():
    assert decomposition_report(1) == (1, 1, 1)
    assert decomposition_report(2) == (1, 1, 1)


def test_relation_report():
    assert relation_report(1) == (1, -2)
    assert relation_report(2) == (1, -4)


def test_bracket_identities():
    # [L, K] = -2L and [insertion, K] = 2*insertion on the full basis
    for om in (OM2, OM4, OM6):
        for b in blades(om.dim):
            if b.is_zero() or len(b.blade_degrees()) != 1:
                continue
            lk = apply_L(apply_K(b), om) - apply_K(apply_L(b, om))
            assert lk == -2 * apply_L(b, om)
            sk = apply_Lstar(apply_K(b), om) - apply_K(apply_Lstar(b, om))
            assert sk == 2 * apply_Lstar(b, om)


def test_l_insertion_bracket_sign():
    # [L, iota_w] = s (K - n Id) with one global s; derived s = -1
    for om in (OM2, OM4, OM6):
        for b in blades(om.dim):
            lhs = apply_L(apply_Lstar(b, om), om) - \
                apply_Lstar(apply_L(b, om), om)
            k = b.blade_degrees()[0] if b.terms else 0
            assert lhs == -1 * (k - om.n) * b


def test_kstar_identity():
    for om in (OM2, OM4):
        for b in blades(om.dim):
            assert kstar_op(b, om) == apply_K(b) - 2 * om.n * b


def test_lh_family_brackets():
    # verified internally by family_ops; also check the base case matches
    fam_L, fam_Lstar, fam_A = family_ops(1)
    for b in blades(2):
        assert fam_L(b) == apply_Lh(b, OM2)
        assert fam_Lstar(b) == apply_Lhstar(b, OM2)
        assert fam_A(b) == apply_Ah(b, OM2)
    family_ops(1, sign=1, p=Fraction(1, 2), q=3, r=-2)
    family_ops(2, sign=-1, p=0, q=0, r=0)


def test_lh_lhstar_commute_and_ah_brackets():
    for om in (OM2, OM4):
        for b in blades(om.dim):
            for j in (-1, 0, 1):
                bj = b.h_shift(j)
                c1 = apply_Lh(apply_Ah(bj, om), om) - \
                    apply_Ah(apply_Lh(bj, om), om)
                assert c1 == 2 * apply_Lh(bj, om)
                c2 = apply_Lhstar(apply_Ah(bj, om), om) - \
                    apply_Ah(apply_Lhstar(bj, om), om)
                assert c2 == -2 * apply_Lhstar(bj, om)
                c3 = apply_Lh(apply_Lhstar(bj, om), om) - \
                    apply_Lhstar(apply_Lh(bj, om), om)
                assert c3.is_zero()


def test_lefschetz_matrix_frozen():
    odd = lefschetz_matrix(1, "odd")
    assert odd.mat == [[Fraction(1), Fraction(0)],
                       [Fraction(0), Fraction(1)]]
    even = lefschetz_matrix(1, "even")
    assert even.mat == [[Fraction(0), Fraction(-1)],
                        [Fraction(1), Fraction(2)]]
    cp = even.char_poly()
    assert cp.coeffs == [Fraction(1), Fraction(-2), Fraction(1)]
    assert cp.rational_roots()[0] == [(Fraction(1), 2)]


def test_lefschetz_invertible():
    for n in (1, 2, 3):
        for parity in ("even", "odd"):
            m = lefschetz_matrix(n, parity)
            assert len(m.basis) == 1 << (2 * n - 1)
            assert m.det() != 0


def test_window_shift_invariance():
    # multiplication by h identifies window m with m+2 and commutes with
    # the normalized Lefschetz operator
    for n in (1, 2):
        om = SymplecticForm(2 * n)

        def op(form):
            return apply_Lh(form, om).h_shift(-1)

        for m in (0, 1):
            a = window_matrix(op, n, m, m)
            b = window_matrix(op, n, m + 2, m + 2)
            assert a == b
            assert [p for p, _ in graded_window_basis(n, m + 2)] == \
                [p + 1 for p, _ in graded_window_basis(n, m)]


def test_det_recursion_frozen():
    rep = det_recursion_check([[Fraction(2)]], 1)
    assert rep["levels"] == [True] and rep["closed_form"] and rep["mirror"]
    rep2 = det_recursion_check([[Fraction(0)]], 2)
    assert rep2["closed_form"] and rep2["mirror"]


def test_det_recursion_random():
    rng = Random(41)
    for _ in range(5):
        size = rng.randint(1, 3)
        m1 = [[Fraction(rng.randint(-3, 3)) for _ in range(size)]
              for _ in range(size)]
        depth = rng.randint(1, 3)
        if size * (1 << depth) > 64:
            continue
        rep = det_recursion_check(m1, depth)
        assert all(rep["levels"]) and rep["closed_form"] and rep["mirror"]


def test_char_poly_linop_api():
    assert char_poly([[Fraction(0), Fraction(1)],
                      [Fraction(1), Fraction(2)]]).coeffs == \
        [Fraction(-1), Fraction(-2), Fraction(1)]
