"""Complex frame, bidegrees and the Hermitian pairing: frozen values
first, then the structural laws and the derived adjoint relation."""

from fractions import Fraction
from random import Random

import pytest

from qdr.bigraded import (
    BigradedForm,
    Frame,
    adjoint_check,
    bidegree_components,
    complexify,
    derive_adjoint_law,
    hermitian_gram,
    hermitian_pairing,
    hermitian_prefactor,
    holomorphic_frame,
    i_pow,
    quantum_wedge_cx,
    raw_pairing,
    standard_frame,
)
from qdr.blades import blade_degree
from qdr.exterior import Bivector, QForm, quantum_wedge
from qdr.rand import random_qform
from qdr.scalars import GaussRat, I
from qdr.symplectic import SymplecticForm, bivector_of

ONE1 = BigradedForm.monomial(1, 0)
F1 = BigradedForm.monomial(1, 0b01)
F1B = BigradedForm.monomial(1, 0b10)
TOP1 = BigradedForm.monomial(1, 0b11)
W2 = bivector_of(SymplecticForm(2))
W4 = bivector_of(SymplecticForm(4))


def test_standard_frame_builds():
    fr = standard_frame(1)
    assert fr.n == 1
    assert fr.wcx().upper_entries() == [(1, 2, I * 2)]
    fr2 = holomorphic_frame(SymplecticForm(4))
    cx = [(i, j, str(c)) for i, j, c in fr2.wcx().upper_entries()]
    assert cx == [(1, 3, "2*i"), (2, 4, "2*i")]


def test_frame_rejects_bad_structures():
    with pytest.raises(ValueError):
        Frame(SymplecticForm(2), J=[[1, 0], [0, 1]])
    # squares to -1 but scales omega, so compatibility fails
    with pytest.raises(ValueError):
        Frame(SymplecticForm(2), J=[[0, -2], [Fraction(1, 2), 0]])
    # negatively oriented J: the induced metric comes out negative
    with pytest.raises(ValueError):
        Frame(SymplecticForm(2), J=[[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        Frame(SymplecticForm(2), basis=[[1, 0], [0, 2]])
    with pytest.raises(ValueError):
        Frame(SymplecticForm(2), basis=[[0, 1], [1, 0]])


def test_frame_accepts_rotated_basis():
    # b2 = J b1 and both unit length for g: any g-rotation works
    fr = Frame(SymplecticForm(2),
               basis=[[Fraction(3, 5), Fraction(4, 5)],
                      [Fraction(-4, 5), Fraction(3, 5)]])
    assert fr.wcx().upper_entries() == [(1, 2, I * 2)]


def test_complexify_omega_is_pure_one_one():
    fr = standard_frame(1)
    om = QForm(2, {0b11: 1})
    cx = fr.complexify(om)
    assert cx.bidegree() == (1, 1)
    assert cx.form.terms[0b11].coeff(0) == I * Fraction(1, 2)
    # e1 splits evenly into the frame covector and its conjugate
    e1 = fr.complexify(QForm.one_form(2, 1))
    assert e1.form.terms[0b01].coeff(0) == GaussRat(Fraction(1, 2))
    assert e1.form.terms[0b10].coeff(0) == GaussRat(Fraction(1, 2))


def test_realify_roundtrip():
    rng = Random(71)
    for n in (1, 2):
        fr = standard_frame(n)
        for _ in range(12):
            form = random_qform(rng, 2 * n, nterms=3, max_h=1)
            assert fr.realify(fr.complexify(form)) == form


def test_realify_rejects_non_real():
    fr = standard_frame(1)
    with pytest.raises(ValueError):
        fr.realify(F1)


def test_bidegree_counts_h_as_one_one():
    assert BigradedForm.monomial(1, 0b01, h_exp=1).bidegree() == (2, 1)
    assert BigradedForm.monomial(2, 0b1001, h_exp=2).bidegree() == (3, 3)
    mixed = F1 + F1B
    assert mixed.bidegree() is None
    parts = bidegree_components(mixed)
    assert set(parts) == {(1, 0), (0, 1)}
    assert parts[(1, 0)] == F1 and parts[(0, 1)] == F1B


def test_conjugation():
    assert F1.conj() == F1B
    assert F1B.conj() == F1
    # swapping both slots of the top blade reverses orientation
    assert TOP1.conj() == TOP1 * Fraction(-1)
    assert (F1 * I).conj() == F1B * (-I)
    rng = Random(72)
    for n in (1, 2):
        for _ in range(10):
            form = BigradedForm(n, random_qform(rng, 2 * n, nterms=3))
            assert form.conj().conj() == form


def test_wedge_cx_frozen_values():
    assert quantum_wedge_cx(F1, F1, W2).is_zero()
    prod = quantum_wedge_cx(F1, F1B, W2)
    assert prod.form.terms[0b11].coeff(0) == GaussRat(1)
    assert prod.form.terms[0].coeff(1) == I * 2
    # reversed order flips the blade and the pairing term
    back = quantum_wedge_cx(F1B, F1, W2)
    assert back.form.terms[0b11].coeff(0) == GaussRat(-1)
    assert back.form.terms[0].coeff(1) == -I * 2


def test_wedge_cx_bidegree_additivity():
    # contraction trades one holomorphic and one antiholomorphic slot
    # for a power of h, so pure bidegrees add
    rng = Random(73)
    for _ in range(40):
        n = rng.choice((1, 2))
        w = W2 if n == 1 else W4
        ma = rng.randrange(1 << (2 * n))
        mb = rng.randrange(1 << (2 * n))
        a = BigradedForm.monomial(n, ma)
        b = BigradedForm.monomial(n, mb)
        prod = quantum_wedge_cx(a, b, w)
        if prod.is_zero():
            continue
        pa, qa = a.bidegree()
        pb, qb = b.bidegree()
        assert prod.bidegree() == (pa + pb, qa + qb)


def test_wedge_cx_matches_real_product():
    rng = Random(74)
    for n in (1, 2):
        fr = standard_frame(n)
        w = W2 if n == 1 else W4
        for _ in range(10):
            a = random_qform(rng, 2 * n, nterms=2, max_h=1)
            b = random_qform(rng, 2 * n, nterms=2, max_h=1)
            direct = fr.complexify(quantum_wedge(a, b, w))
            framed = quantum_wedge_cx(fr.complexify(a), fr.complexify(b), w,
                                      fr)
            assert direct == framed


def test_wedge_cx_rejects_non_invariant_pairing():
    with pytest.raises(ValueError):
        quantum_wedge_cx(BigradedForm.monomial(2, 0b0001),
                         BigradedForm.monomial(2, 0b0010),
                         Bivector(4, {(1, 3): 1}))


def test_pairing_frozen_values():
    assert hermitian_pairing(ONE1, ONE1) == GaussRat(1)
    assert hermitian_pairing(F1, F1) == GaussRat(2)
    assert hermitian_pairing(F1, F1B) == GaussRat()
    assert hermitian_pairing(F1B, F1B) == GaussRat(2)
    assert hermitian_pairing(F1B, F1B, variant="printed") == GaussRat(-2)
    assert hermitian_pairing(TOP1, TOP1) == GaussRat(4)


def test_pairing_requires_pure_first_argument():
    with pytest.raises(ValueError):
        hermitian_pairing(F1 + F1B, F1)
    # mixed second argument is fine: the pairing is additive there
    assert hermitian_pairing(F1, F1 + F1B) == GaussRat(2)


def test_pairing_sesquilinear():
    rng = Random(75)
    for _ in range(20):
        n = rng.choice((1, 2))
        deg = rng.randrange(2 * n + 1)
        masks = [m for m in range(1 << (2 * n)) if blade_degree(m) == deg]
        a = BigradedForm(n, random_qform(rng, 2 * n, nterms=2, max_h=0,
                                         degree=deg))
        b = BigradedForm(n, random_qform(rng, 2 * n, nterms=2, max_h=0,
                                         degree=deg))
        if a.is_zero() or a.bidegree() is None:
            continue
        h_ab = hermitian_pairing(a, b)
        assert hermitian_pairing(a * I, b) == I * h_ab
        assert hermitian_pairing(a, b * I) == -I * h_ab
        if b.bidegree() is not None:
            assert hermitian_pairing(b, a) == h_ab.conj()


def test_gram_diagonal_powers_of_two():
    for n in (1, 2):
        gram = hermitian_gram(n)
        for (ma, mb), val in gram.items():
            assert ma == mb
            form = BigradedForm.monomial(n, ma)
            p, q = form.bidegree()
            assert val == GaussRat(2 ** (p + q))
        # every monomial shows up on the diagonal
        assert len(gram) == 1 << (2 * n)


def test_printed_prefactor_indefinite():
    gram = hermitian_gram(1, variant="printed")
    assert gram[(0b10, 0b10)] == GaussRat(-2)
    assert gram[(0b01, 0b01)] == GaussRat(2)


def test_prefactor_relation():
    # the positive variant differs from the printed one by (-1)^q, and
    # the two printed index expressions agree on equal bidegrees, which
    # is the only place classical forms pair nonzero
    for p in range(4):
        for q in range(4):
            printed = hermitian_prefactor(p, q, "printed")
            derived = hermitian_prefactor(p, q, "derived")
            assert derived == printed * ((-1) ** q)
    with pytest.raises(ValueError):
        hermitian_prefactor(1, 1, "other")


def test_classical_pairs_share_bidegree():
    # nonzero pairing of h-free monomials forces equal bidegrees, so
    # the two sign expressions written for the pairing coincide there
    for n in (1, 2):
        for ma in range(1 << (2 * n)):
            a = BigradedForm.monomial(n, ma)
            for mb in range(1 << (2 * n)):
                b = BigradedForm.monomial(n, mb)
                if raw_pairing(a, b):
                    assert a.bidegree() == b.bidegree()


def test_h_laden_pairs_break_bidegree_sharing():
    # with h in play the pairing connects different bidegrees: the
    # agreement of the two sign expressions is a classical statement
    a = F1
    b = BigradedForm.monomial(1, 0b01, h_exp=1)
    assert a.bidegree() != b.bidegree()
    assert raw_pairing(a, b) == I * 2


def test_adjoint_single_triples():
    out = adjoint_check(ONE1, F1, F1)
    assert out["lhs"] == GaussRat(2)
    assert out["printed"] == GaussRat()
    assert not out["printed_holds"]
    assert out["conjugated"] == I * 2
    assert not out["conjugated_holds"]
    assert out["raw_holds"]
    assert out["factor"] == -I
    assert out["factor_holds"]
    # middle factor of balanced bidegree: factor squares away
    out2 = adjoint_check(F1, TOP1, TOP1)
    assert out2["raw_holds"] and out2["factor_holds"]
    assert out2["factor"] == GaussRat(-1)


def test_adjoint_law_exhaustive():
    law1 = derive_adjoint_law(1)
    assert law1["raw_all"]
    assert not law1["printed_all"]
    assert not law1["conjugated_all"]
    assert {s: v for s, v in law1["diagonal_factors"].items()} == \
        {0: GaussRat(1), 1: GaussRat(-1)}
    law2 = derive_adjoint_law(2)
    assert law2["raw_all"]
    assert law2["diagonal_factors"] == {0: GaussRat(1), 1: GaussRat(-1),
                                        2: GaussRat(1)}


def test_adjoint_law_printed_prefactor_is_unital_on_diagonal():
    law = derive_adjoint_law(1, variant="printed")
    assert law["raw_all"]
    assert law["diagonal_factors"] == {0: GaussRat(1), 1: GaussRat(1)}


def test_i_pow_cycle():
    assert [str(i_pow(k)) for k in range(-2, 3)] == \
        ["-1", "-i", "1", "i", "-1"]
