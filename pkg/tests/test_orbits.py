import random

import pytest

from qtorsion import qforms
from qtorsion.binforms import BinForm, DegreeError, GroupElem, PairQD, act
from qtorsion.orbits import (
    HeightExhausted,
    NotUnitResultant,
    enumerate_orbits,
    find_equivalence,
    pairs_equivalent,
    qi_comparison,
    selmer_invariant_experimental,
)
from qtorsion.qforms import QuadForm
from qtorsion.witness import construct_witness
from binforms_helpers import random_elem

QI = QuadForm(1, 0, 1)


def pair(form, coeffs):
    return PairQD(QuadForm(*form), BinForm(coeffs))


def test_witness_is_returned():
    p1 = pair((1, 1, 1), (1, 0, 0, 0))
    p2 = pair((1, 1, 1), (0, 1, 0, 0))
    for a, b in [(p1, p1), (p1, p2), (p2, p1)]:
        g = find_equivalence(a, b)
        if g is not None:
            assert act(g, a) == b


def test_eisenstein_orbits_distinct():
    # y^3 and x y^2 against x^2+xy+y^2
    assert not pairs_equivalent(pair((1, 1, 1), (1, 0, 0, 0)), pair((1, 1, 1), (0, 1, 0, 0)))


def test_real_quadratic_orbits_distinct():
    q = (1, 0, -5)
    assert not pairs_equivalent(pair(q, (1, 0, 0, 0)), pair(q, (-9, -4, 0, 0)))


def test_gaussian_degree_four():
    # x^4 and x^2 y^2 differ by a unipotent only up to the delta-only sign
    p1, p2 = PairQD(QI, BinForm.monomial(4, 4)), PairQD(QI, BinForm.monomial(4, 2))
    g = find_equivalence(p1, p2)
    assert g is not None and act(g, p1) == p2
    assert g.eps == -1 or g.chi == -1 or g.mat != qforms.I2
    p3 = PairQD(QI, BinForm.monomial(4, 1))
    assert p3.is_unit()
    assert not pairs_equivalent(p1, p3)


def test_gaussian_degree_eight_unipotent():
    cmp = qi_comparison(8)
    assert cmp.equivalent and cmp.unipotent_only
    p1, p2 = PairQD(QI, BinForm.monomial(8, 8)), PairQD(QI, BinForm.monomial(8, 4))
    assert act(cmp.witness, p1) == p2
    assert "tension" in cmp.note()


@pytest.mark.parametrize("n", [6, 10])
def test_gaussian_not_divisible_by_four(n):
    cmp = qi_comparison(n)
    assert not cmp.equivalent


def test_errors():
    with pytest.raises(NotUnitResultant):
        find_equivalence(pair((2, 1, 3), (1, 0, 0, 0)), pair((2, 1, 3), (1, 0, 0, 0)))
    with pytest.raises(DegreeError):
        find_equivalence(pair((1, 0, 1), (1, 0, 0)), pair((1, 0, 1), (1, 0, 0)))
    with pytest.raises(DegreeError):
        enumerate_orbits(-23, 2, 1)
    with pytest.raises(ValueError):
        qi_comparison(5)


def test_different_discriminants():
    assert not pairs_equivalent(pair((1, 1, 1), (1, 0, 0, 0)), pair((1, 0, 1), (1, 0, 0, 0)))


ORBIT_FORMS = [(1, 1, 6), (2, 1, 3), (2, -1, 3), (1, 1, 1), (1, 0, 1), (1, 0, -5), (1, 1, -1),
               (2, 1, -4), (3, 1, 4)]


def _unit_pairs(rng, n, count):
    out = []
    for form in ORBIT_FORMS:
        q = QuadForm(*form)
        w = construct_witness(q, n)
        if w is None:
            continue
        for _ in range(count):
            out.append(PairQD(q, w))
    return [act(random_elem(rng, n), p) for p in out]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_orbit_membership_under_random_moves(n):
    rng = random.Random(n)
    for p in _unit_pairs(rng, n, 6):
        g = random_elem(rng, n)
        p2 = act(g, p)
        found = find_equivalence(p, p2)
        assert found is not None and act(found, p) == p2
        back = find_equivalence(p2, p)
        assert back is not None and act(back, p2) == p


def test_equivalence_relation_on_sample():
    rng = random.Random(3)
    pairs = [p for p in _unit_pairs(rng, 3, 2) if p.disc == -23]
    for a in pairs:
        assert pairs_equivalent(a, a)
        for b in pairs:
            ab = pairs_equivalent(a, b)
            assert ab == pairs_equivalent(b, a)
            if not ab:
                continue
            for c in pairs:
                if pairs_equivalent(b, c):
                    assert pairs_equivalent(a, c)


@pytest.mark.parametrize("d,n,height,count", [
    (-3, 3, 2, 2), (-4, 4, 1, 2), (-23, 3, 1, 2), (20, 3, 1, 2), (5, 3, 1, 2),
    (-4, 3, 1, 1), (-3, 4, 1, 1),
])
def test_enumeration_counts(d, n, height, count):
    rep = enumerate_orbits(d, n, height)
    assert rep.count == count == rep.predicted
    for i, a in enumerate(rep.representatives):
        for b in rep.representatives[i + 1:]:
            assert not pairs_equivalent(a, b)


def test_enumeration_gaussian_note():
    rep = enumerate_orbits(-4, 4, 1)
    assert any("tension" in s for s in rep.notes)
    assert rep.as_dict()["agreement"] is True


def test_height_exhausted():
    with pytest.raises(HeightExhausted) as exc:
        enumerate_orbits(-23, 3, 3, max_sweep=100)
    assert exc.value.partial.status == "height-exhausted"
    assert exc.value.partial.swept == 100


def test_short_circuit():
    rep = enumerate_orbits(-23, 3, 2, short_circuit=True)
    assert rep.count == rep.predicted == 2


def test_experimental_invariant():
    out = selmer_invariant_experimental(pair((1, 1, 6), (-1, 0, 0, 0)))
    assert out["experimental"] and out["trivial"]
    out = selmer_invariant_experimental(pair((1, 0, -5), (-9, -4, 0, 0)))
    assert out["experimental"] and out["trivial"] is False
    # invariant along an orbit for the principal class
    rng = random.Random(11)
    p = pair((1, 0, -5), (-9, -4, 0, 0))
    base = out["unit_part"]
    for _ in range(10):
        g = GroupElem(3, [rng.randint(-3, 3), rng.randint(-3, 3)])
        assert selmer_invariant_experimental(act(g, p))["unit_part"] == base


@pytest.mark.parametrize("n", [3, 4, 5])
def test_same_form_quotient_is_unit(n):
    from qtorsion.qorders import evaluate_binform, ideal_from_form

    rng = random.Random(40 + n)
    checked = 0
    for p in _unit_pairs(rng, n, 4):
        if p.q.a <= 0:
            continue
        data = ideal_from_form(p.q)
        for _ in range(6):
            p2 = act(random_elem(rng, n), p)
            if p2.q != p.q:
                continue
            assert pairs_equivalent(p, p2)
            a, b = evaluate_binform(p.delta, data), evaluate_binform(p2.delta, data)
            u = b.exact_div(a, strict=False)
            assert u is not None and u.is_unit()
            checked += 1
    assert checked > 0
