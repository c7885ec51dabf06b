from fractions import Fraction

import pytest

from nodalcones import cone_engine as ce
from nodalcones.cubic import (
    AssumptionRequired,
    CubicLatticeData,
    abel_jacobi_transfer,
    admissible_discriminant,
    cubic_presets,
    decompose_in_nodal_basis,
    delta_from_ruling,
    delta_min,
    fano_config,
    isometry_check,
    nodal_deltas,
    nodal_scroll_table,
    records_to_json,
    records_to_tsv,
    ruling_class,
    ruling_pairings,
    scroll_discriminant,
    scroll_record,
    scroll_self_intersection,
    unirational_degree,
)
from nodalcones.qlattice import LatticeError, determinant, square


def test_transfer_examples():
    assert abel_jacobi_transfer(CubicLatticeData(1, 3))[0].gram == ((6, 2), (2, -2))
    assert abel_jacobi_transfer(CubicLatticeData(4, 10))[0].gram == ((6, 8), (8, 6))
    gram, prof = abel_jacobi_transfer(CubicLatticeData(5, 17))
    assert gram.gram == ((6, 10), (10, 8)) and prof.divisors == (2, 1)


def test_invalid_cubic_data():
    with pytest.raises(LatticeError):
        CubicLatticeData(0, 2)  # disc 6
    with pytest.raises(LatticeError):
        CubicLatticeData(1, 3, h2_sq=4)


def test_scroll_formulas():
    assert scroll_self_intersection(4, 0) == 10
    assert scroll_self_intersection(5, 1) == 15
    assert scroll_self_intersection(3, 0) == 7
    assert scroll_discriminant(2, 0) == 8
    assert scroll_discriminant(8, 6) == 38
    assert scroll_discriminant(11, 16) == 68
    assert scroll_discriminant(5, 1) == 20


def test_delta_from_ruling():
    assert delta_from_ruling(4, -2) == 0
    # the table rows (7,3) and (9,9) come from (R,R) = -1/2 and -5/2 respectively;
    # the opposite pairing gives the neighbouring rows
    assert delta_from_ruling(7, Fraction(-1, 2)) == 3
    assert delta_from_ruling(7, Fraction(-5, 2)) == 4
    assert delta_from_ruling(9, Fraction(-5, 2)) == 9
    assert delta_from_ruling(9, Fraction(-1, 2)) == 8
    with pytest.raises(LatticeError):
        delta_from_ruling(4, Fraction(-1, 2))


def test_delta_min():
    assert delta_min(7) == 0
    assert delta_min(8) == 1
    assert delta_min(12) == 8


def test_nodal_deltas():
    assert nodal_deltas(10) == {12}
    assert nodal_deltas(9) == {9, 8}
    assert nodal_deltas(5) == {1, 0}


def test_table_rows():
    rows = {(r.n, r.delta): r for r in nodal_scroll_table(11)}
    assert rows[(6, 2)].disc == 24
    assert rows[(5, 1)].disc == 20
    assert len(rows) == 14


def test_speculative_rows_are_flagged():
    rows = nodal_scroll_table(8, speculative=True)
    nodal = {(r.n, r.delta) for r in nodal_scroll_table(8)}
    extra = [r for r in rows if (r.n, r.delta) not in nodal]
    assert extra and all(any("speculative" in w for w in r.warnings) for r in extra)
    assert all(r.delta >= max(0, delta_min(r.n)) for r in rows)


def test_unirational_degree():
    assert unirational_degree(4, 0, True, True) == 1
    assert unirational_degree(5, 2, True, True) == 1
    for N in range(2, 11):
        assert unirational_degree(2 * N + 1, N * (N - 2), True, True) == N * N - N + 1
    with pytest.raises(AssumptionRequired):
        unirational_degree(4, 0)
    with pytest.raises(AssumptionRequired):
        unirational_degree(4, 0, not_cone=True)
    with pytest.raises(LatticeError):
        unirational_degree(4, 1, True, True)


def test_known_nonexistence_and_saturation_warnings():
    assert any("two ordinary double points" in w for w in scroll_record(5, 2).warnings)
    assert any("saturation" in w for w in scroll_record(8, 5).warnings)
    assert scroll_record(4, 0).warnings == ()


def test_ruling_class():
    f26 = fano_config(CubicLatticeData(5, 17))
    assert ruling_class(f26, 5, 17).coords == (5, -2)
    f8 = fano_config(CubicLatticeData(1, 3))
    assert ruling_pairings(f8, f8.vector(0, 1)) == (1, -1)
    f14 = fano_config(CubicLatticeData(4, 10))
    # (2tau-g, g) = -6+16 and (2tau-g, tau) = -8+12 on [[6,8],[8,6]]
    assert ruling_pairings(f14, f14.vector(-1, 2)) == (5, 2)
    with pytest.raises(LatticeError):
        ruling_class(f8, 1, 0)


def test_decompose_in_nodal_basis():
    f26 = fano_config(CubicLatticeData(5, 17))
    n1, n2 = f26.vector(-1, 2), f26.vector(109, -38)
    d = decompose_in_nodal_basis(f26.vector(5, -2), (n1, n2))
    assert (d.a, d.b) == (Fraction(-7, 45), Fraction(2, 45)) and d.verdict == "outside"
    assert decompose_in_nodal_basis(n1, (n1, n2)).verdict == "inside"
    d = decompose_in_nodal_basis(n1 + n2, (n1, n2))
    assert (d.a, d.b) == (1, 1) and not d.outside
    with pytest.raises(LatticeError):
        decompose_in_nodal_basis(n1, (n1, n1 * 2))


def test_admissible_discriminant():
    assert admissible_discriminant(8)
    assert not admissible_discriminant(6)
    assert not admissible_discriminant(10)


def test_isometry_check():
    gram = ((6, 8), (8, 4))
    M = ((5, 12), (-2, -5))
    assert isometry_check(M, gram)
    assert isometry_check(((1, 0), (0, 1)), gram)
    assert not isometry_check(((2, 0), (0, 1)), gram)
    # M acts on column vectors and swaps 2v-g and 19g-8v
    apply = lambda v: (M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1])  # noqa: E731
    assert apply((-1, 2)) == (19, -8) and apply((19, -8)) == (-1, 2)


def test_presets():
    discs = [K.disc for K in cubic_presets()]
    assert discs == [8, 12, 14, 20, 26]
    assert all(admissible_discriminant(d) for d in discs)


def test_serializations():
    rows = nodal_scroll_table(4)
    tsv = records_to_tsv(rows).splitlines()
    assert tsv[0] == "n\tdelta\tself_int\tdisc\tr_square\tunirat_deg\twarnings"
    assert tsv[1] == "2\t0\t4\t8\t-2\t\t"
    assert '"r_square": "-2"' in records_to_json(rows)


def test_nodal_degrees_cubic_14():
    k = fano_config(CubicLatticeData(4, 10))
    got = {e.vector.coords: (e.curve(k).degree, e.curve(k).div) for e in ce.nodal_classes(k)}
    assert got == {(2, -1): (4, 1), (-1, 2): (5, 2)}
    assert determinant(k.lattice) == -28
    assert square(k.vector(2, -1)) == -2
