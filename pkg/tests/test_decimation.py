from fractions import Fraction

import pytest

from hanoi_schreier import decimation as dec
from hanoi_schreier.exact import Poly, variables
from hanoi_schreier.graph import adjacency, build_graph
from hanoi_schreier.spectrum import multiplicity_a, multiplicity_b

F = Fraction
X, Y = variables(2)


def test_pencil_at_y1_is_shifted_adjacency():
    for n in (1, 2, 3):
        m = dec.assemble_pencil(n, 2, 1)
        a = adjacency(build_graph(3, n)).toarray()
        assert [[int(v) for v in row] for row in m] == (a - 2 * __import__("numpy").eye(3**n, dtype=int)).tolist()


def test_pencil_small_cases():
    assert dec.assemble_pencil(1, 0, 1) == [[1, 1, 1]] * 3
    m = dec.assemble_pencil(1, 0, 0)
    assert m == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    m2 = dec.assemble_pencil(2, F(1, 3), F(5, 7))
    assert all(m2[i][j] == m2[j][i] for i in range(9) for j in range(9))
    # off-diagonal blocks are y * identity
    assert m2[0][3] == F(5, 7) and m2[0][4] == 0
    with pytest.raises(ValueError):
        dec.assemble_pencil(6, 0, 1)


def test_det_pencil_examples():
    assert dec.det_pencil(1, 0, 2) == 5 == dec.d1_formula(0, 2)
    assert dec.det_pencil(1, 3, 1) == 0
    assert dec.det_pencil(2, -2, 1) == 0


def test_d1_formula_matches_pencil():
    for pt in dec.sample_points(10, 0, seed=3):
        assert dec.det_pencil(1, *pt) == dec.d1_formula(*pt)


def test_apply_F_examples():
    assert dec.apply_F((0, 2)) == (F(32, 9), F(4, 9))
    psi = dec.PSI.evaluate((F(0), F(2)))
    assert psi == F(-9, 2)
    assert psi**2 - psi - 3 == F(87, 4) == dec.PSI.evaluate((F(32, 9), F(4, 9)))
    with pytest.raises(dec.DegeneratePointError):
        dec.apply_F((2, 1))


def test_recursion_examples():
    assert dec.recursion_check(2, (0, 2))
    for pt in dec.sample_points(5, 3, seed=11):
        assert dec.recursion_check(3, pt)
    with pytest.raises(dec.DegeneratePointError):
        dec.recursion_check(2, (2, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_recursion_twenty_points(n):
    pts = dec.sample_points(20, n, seed=n)
    assert len(set(pts)) == 20
    assert all(dec.recursion_check(n, p) for p in pts)


def test_recursion_level_five():
    assert all(dec.recursion_check(5, p) for p in dec.sample_points(20, 5, seed=5))


def test_det_via_recursion():
    for pt in dec.sample_points(5, 4, seed=2):
        assert dec.det_via_recursion(3, pt) == dec.det_pencil(3, *pt)


def test_sample_points_deterministic_and_regular():
    a = dec.sample_points(20, 3, seed=7)
    assert a == dec.sample_points(20, 3, seed=7)
    assert a != dec.sample_points(20, 3, seed=8)
    for x, y in a:
        assert y != 0 and abs(x.numerator) <= 9 and x.denominator <= 9


def test_semiconjugacy():
    assert dec.semiconjugacy_identity()
    assert dec.semiconjugacy_residual().is_zero()
    assert not dec.semiconjugacy_identity((1, -1, -2))


def test_psi_split():
    assert dec.psi_split_identity()
    assert not dec.psi_split_identity(lambda t: -t)


def test_psi_split_specialised():
    # theta = 0 at (0, 2): theta0, theta1 = (1 -+ sqrt 13)/2, product paired exactly
    pt = (F(0), F(2))
    lhs = dec.A1_POLY.evaluate(pt) / (dec.L_POLY.evaluate(pt) * dec.K_POLY.evaluate(pt)) * dec.preimage_product(0, 1, pt)
    x1, y1 = dec.apply_F(pt)
    assert lhs == dec.psi_theta(0).evaluate((x1, y1))


def test_preimage_product_against_floats():
    import numpy as np

    from hanoi_schreier.spectrum import preimage_family

    pt = (F(3, 7), F(-2, 5))
    for base, depth in ((0, 2), (-2, 3)):
        thetas = preimage_family(float(base), depth).values
        x, y = float(pt[0]), float(pt[1])
        approx = np.prod(x * x - 1 - x * y - 2 * y * y - thetas * y)
        exact = float(dec.preimage_product(base, depth, pt))
        assert approx == pytest.approx(exact, rel=1e-9)


def test_factorization_examples():
    assert dec.build_factorization(1).exponents() == {"D0": 1, "A1": 2}
    assert dec.build_factorization(2).exponents() == {"D0": 1, "A1": 3, "A2": 2, "B2": 1}
    assert dec.build_factorization(1).evaluate((0, 2)) == 5 == dec.D0_POLY.evaluate((F(0), F(2))) * 1
    fam = dec.build_factorization(5)
    sizes = {f.name: len(f.thetas()) for f in fam.factors if f.base is not None}
    assert sizes == {"A2": 1, "A3": 2, "A4": 4, "A5": 8, "B3": 1, "B4": 2, "B5": 4}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_factorization_twenty_points(n):
    pts = dec.sample_points(20, 0, seed=100 + n)
    assert all(dec.factorization_check(n, p) for p in pts)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_factorization_degree(n):
    assert dec.build_factorization(n).degree() == 3**n


@pytest.mark.parametrize("n", range(2, 13))
def test_exponent_identities(n):
    m = dec.exponent_m(n)
    a, b = multiplicity_a, multiplicity_b
    assert 3 ** (n - 2) == m + 1
    assert 2 * 3 ** (n - 2) == m + a(n - 1) + b(n - 1)
    assert a(n) == m + a(n - 1) + 1
    assert b(n) == b(n - 1) + 3 ** (n - 2)


def test_restriction_to_y_equal_one():
    (t,) = variables(1)

    def at_y1(p: Poly) -> Poly:
        return p.compose([t, Poly.const(1, 1)])

    f = t * t - t - 3
    assert at_y1(dec.PSI_NUM) == f
    assert at_y1(dec.psi_theta(F(5, 3))) == f - F(5, 3)
    assert at_y1(dec.A1_POLY) == t
    assert at_y1(dec.B2_POLY) == t + 2
    assert at_y1(dec.D0_POLY) == -(t - 3)


def test_F_denominators():
    lk = dec.L_POLY * dec.K_POLY
    assert dec.F_X.den == lk and dec.F_Y.den == lk


def test_hyperbola_samples():
    pts = dec.hyperbola_samples(0, [1.0], minus_two_depth=-1)
    psi0 = sorted(p.x for p in pts if p.curve == "psi0")
    assert psi0 == pytest.approx([(1 - 13**0.5) / 2, (1 + 13**0.5) / 2])
    d0 = [p for p in pts if p.curve == "D0"]
    assert d0[0].x == 3.0
    many = dec.hyperbola_samples(3, [-2.0, -0.5, 0.25, 1.0, 2.5])
    assert max(dec.curve_residual(p) for p in many) < 1e-9
    with pytest.raises(ValueError):
        dec.hyperbola_samples(7, [1.0])


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_auxiliary_curve_count(level):
    pts = dec.auxiliary_samples(level, [0.5, 1.0])
    curves = {(p.curve, p.theta_depth, p.theta_index) for p in pts}
    assert len(curves) == dec.auxiliary_curve_count(level)
    if level == 2:
        assert len(curves) == 1 + 3


def test_curves_csv_roundtrip():
    pts = dec.auxiliary_samples(3, [0.5, 1.5])
    text = dec.curves_to_csv(pts)
    assert text.splitlines()[0] == "curve,theta_depth,theta_index,x,y"
    assert dec.curves_from_csv(text) == pts
