import random
from fractions import Fraction

import pytest

from uniloc.abgroup import INFINITE
from uniloc.errors import InputError
from uniloc.segre import (BihomogPoly, CoordinateChange, LinearPair,
                          ORIENT_XV_YU, ORIENT_XY_VU, PolyPrime, Polynomial,
                          SegrePrime, S_NAMES, XYUV_NAMES, bidegree,
                          case1_normal_form, classify_segre, coordinate_prime,
                          embed_xyuv, is_irreducible, parse_polynomial, psi,
                          rho, to_xyuv)


def spoly(text):
    return parse_polynomial(text, S_NAMES)


class TestPolynomial:
    def test_make_normalizes(self):
        p = Polynomial.make(S_NAMES, {(1, 0, 1, 0): 1, (0, 1, 0, 1): -1})
        assert p.render() == "S0*T0 - S1*T1"
        q = Polynomial.make(S_NAMES, {(1, 0, 1, 0): 2, (1, 0, 1, 0): 2})
        assert q.coefficient((1, 0, 1, 0)) == 2  # dict keys merge upstream
        z = Polynomial.make(S_NAMES, {(1, 0, 0, 0): 1}) - \
            Polynomial.make(S_NAMES, {(1, 0, 0, 0): 1})
        assert z.is_zero() and z.render() == "0"

    def test_bad_exponents(self):
        with pytest.raises(InputError):
            Polynomial.make(S_NAMES, {(1, 0): 1})
        with pytest.raises(InputError):
            Polynomial.make(S_NAMES, {(-1, 0, 0, 0): 1})
        with pytest.raises(InputError):
            Polynomial.variable(S_NAMES, "W")

    def test_algebra(self):
        s0 = Polynomial.variable(S_NAMES, "S0")
        t0 = Polynomial.variable(S_NAMES, "T0")
        assert (s0 + t0) - t0 == s0
        assert (s0 * t0).coefficient((1, 0, 1, 0)) == 1
        assert (2 * s0).render() == "2*S0"
        assert (s0 ** 3).render() == "S0^3"
        assert (s0 * Fraction(1, 2)).render() == "1/2*S0"
        with pytest.raises(InputError):
            s0 ** -1

    def test_substitute(self):
        x = Polynomial.variable(XYUV_NAMES, "X")
        u = Polynomial.variable(XYUV_NAMES, "U")
        f = x * u + 2 * x
        images = {"X": Polynomial.variable(XYUV_NAMES, "Y"),
                  "Y": Polynomial.variable(XYUV_NAMES, "Y"),
                  "U": Polynomial.variable(XYUV_NAMES, "V"),
                  "V": Polynomial.variable(XYUV_NAMES, "V")}
        g = f.substitute(images)
        assert g == Polynomial.variable(XYUV_NAMES, "Y") \
            * Polynomial.variable(XYUV_NAMES, "V") \
            + 2 * Polynomial.variable(XYUV_NAMES, "Y")


class TestParser:
    def test_basic_inputs(self):
        assert spoly("S0*T0 - S1*T1").render() == "S0*T0 - S1*T1"
        assert spoly("-S0 + 2*S1").render() == "-S0 + 2*S1"
        assert spoly("1/2*S0").coefficient((1, 0, 0, 0)) == Fraction(1, 2)
        assert spoly("3").coefficient((0, 0, 0, 0)) == 3
        assert spoly("S0^2*T1").coefficient((2, 0, 0, 1)) == 1
        assert spoly("S0 - S0").is_zero()
        assert spoly("2*S0*3").coefficient((1, 0, 0, 0)) == 6

    def test_whitespace_insensitive(self):
        assert spoly(" S0 * T0-S1*T1 ") == spoly("S0*T0-S1*T1")

    def test_errors(self):
        bad = ["", "S0 +", "+", "S0 * * T0", "S0 T0", "W0", "1/0*S0",
               "S0^", "S0^T0", "~S0", "S0*", "S0 + + S1", "S0T0"]
        for text in bad:
            with pytest.raises(InputError):
                spoly(text)

    def test_render_parse_round_trip(self):
        rng = random.Random(303)
        for _ in range(120):
            terms = {}
            for _ in range(rng.randint(1, 5)):
                expo = tuple(rng.randint(0, 2) for _ in range(4))
                coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 5]),
                                 rng.choice([1, 1, 2]))
                terms[expo] = coeff
            p = Polynomial.make(S_NAMES, terms)
            if p.is_zero():
                continue
            assert spoly(p.render()) == p


class TestBihomog:
    def test_bidegree(self):
        assert bidegree(BihomogPoly.from_string("S0*T0 - S1*T1")) == (1, 1)
        assert bidegree(BihomogPoly.from_string("S0*T0^2 + S1*T1^2")) == (1, 2)
        assert bidegree(BihomogPoly.from_string("S0")) == (1, 0)

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            BihomogPoly.from_string("S0 + T0")
        with pytest.raises(InputError):
            BihomogPoly.from_string("S0 - S0")
        with pytest.raises(InputError):
            BihomogPoly(Polynomial.variable(XYUV_NAMES, "X"))


class TestEmbedding:
    def test_images_of_the_four_variables(self):
        for name, expo in (("X", (1, 0, 1, 0)), ("Y", (0, 1, 1, 0)),
                           ("U", (0, 1, 0, 1)), ("V", (1, 0, 0, 1))):
            img = embed_xyuv(Polynomial.variable(XYUV_NAMES, name))
            assert img.terms == ((expo, Fraction(1)),)

    def test_relation_collapses(self):
        x = Polynomial.variable(XYUV_NAMES, "X")
        y = Polynomial.variable(XYUV_NAMES, "Y")
        u = Polynomial.variable(XYUV_NAMES, "U")
        v = Polynomial.variable(XYUV_NAMES, "V")
        assert embed_xyuv(x * u).poly == embed_xyuv(y * v).poly

    def test_lift_prefers_xu(self):
        f = BihomogPoly.from_terms({(1, 1, 1, 1): 1})
        assert to_xyuv(f).render() == "X*U"

    def test_lift_examples(self):
        assert to_xyuv(BihomogPoly.from_string("S0*T0 + S1*T1")).render() == "X + U"
        assert to_xyuv(BihomogPoly.from_string("S0*T0 - S1*T1")).render() == "X - U"
        assert to_xyuv(BihomogPoly.from_string("S0*T1")).render() == "V"

    def test_lift_needs_balanced_bidegree(self):
        with pytest.raises(InputError):
            to_xyuv(BihomogPoly.from_string("S0"))

    def test_lift_round_trip_randomized(self):
        rng = random.Random(304)
        for _ in range(80):
            d = rng.randint(1, 3)
            terms = {}
            for _ in range(rng.randint(1, 4)):
                e0 = rng.randint(0, d)
                f0 = rng.randint(0, d)
                terms[(e0, d - e0, f0, d - f0)] = rng.choice([-2, -1, 1, 3])
            p = Polynomial.make(S_NAMES, terms)
            if p.is_zero():
                continue
            f = BihomogPoly(p)
            lifted = to_xyuv(f)
            assert embed_xyuv(lifted).poly == f.poly
            for expo, _ in lifted.terms:
                assert min(expo[1], expo[3]) == 0  # no Y*V monomials


class TestLinearPair:
    def test_validation(self):
        with pytest.raises(InputError):
            LinearPair((0, 0), ORIENT_XY_VU)
        with pytest.raises(InputError):
            LinearPair((1, 0), "XY-UV")

    def test_members(self):
        assert LinearPair((1, 0), ORIENT_XY_VU).describe() == "(X, V)"
        assert LinearPair((0, 1), ORIENT_XY_VU).describe() == "(Y, U)"
        assert LinearPair((1, 0), ORIENT_XV_YU).describe() == "(X, Y)"
        assert LinearPair((0, 1), ORIENT_XV_YU).describe() == "(U, V)"
        assert LinearPair((1, 1), ORIENT_XY_VU).describe() == "(X + Y, U + V)"
        assert LinearPair((1, -2), ORIENT_XV_YU).describe() == \
            "(X - 2*V, Y - 2*U)"

    def test_f_poly(self):
        assert LinearPair((1, 0), ORIENT_XY_VU).f_poly().render() == "S0"
        assert LinearPair((2, 3), ORIENT_XV_YU).f_poly().render() == \
            "2*T0 + 3*T1"


class TestCoordinateTable:
    def test_psi_and_rho(self):
        table = {("X", "V"): ((1, 0), -1), ("Y", "U"): ((1, 0), -1),
                 ("X", "Y"): ((0, 1), +1), ("U", "V"): ((0, 1), +1)}
        for names, (expected_psi, expected_rho) in table.items():
            p = coordinate_prime(names)
            assert psi(p) == expected_psi
            assert rho(p) == expected_rho

    def test_order_insensitive(self):
        assert coordinate_prime(("V", "X")).describe() == "(X, V)"

    def test_non_prime_pairs_rejected(self):
        with pytest.raises(InputError):
            coordinate_prime(("X", "U"))
        with pytest.raises(InputError):
            coordinate_prime(("Y", "V"))
        with pytest.raises(InputError):
            coordinate_prime(("X",))


class TestNormalForm:
    def test_coordinate_g_is_identity(self):
        c = case1_normal_form(LinearPair((1, 0), ORIENT_XY_VU))
        assert c.matrix == ((1, 0), (0, 1))
        assert c.det == 1
        assert c.normalized == ("X", "V") and c.kill == "Y"
        assert c.verify()

    def test_unipotent_completion(self):
        c = case1_normal_form(LinearPair((1, 1), ORIENT_XY_VU))
        assert c.matrix == ((1, 1), (0, 1)) and c.det == 1
        assert c.verify()

    def test_swap_completion(self):
        c = case1_normal_form(LinearPair((0, 2), ORIENT_XV_YU))
        assert c.matrix == ((0, 2), (1, 0)) and c.det == -2
        assert c.normalized == ("X", "Y") and c.kill == "V"
        assert c.verify()
        assert "determinant -2" in c.describe()

    def test_tampered_change_fails_verify(self):
        c = case1_normal_form(LinearPair((1, 1), ORIENT_XY_VU))
        bad = CoordinateChange(c.matrix, Fraction(7), c.orientation,
                               c.normalized, c.kill)
        assert not bad.verify()

    def test_rejects_poly_primes(self):
        with pytest.raises(InputError):
            case1_normal_form(SegrePrime.poly("S0*T0 - S1*T1"))


class TestIrreducibility:
    def test_bilinear_determinant(self):
        assert is_irreducible(BihomogPoly.from_string("S0*T0 - S1*T1")) is True
        assert is_irreducible(BihomogPoly.from_string("S0*T0 + S1*T1")) is True
        assert is_irreducible(BihomogPoly.from_string("S0*T0 + S1*T0")) is False

    def test_one_sided_quadratics(self):
        assert is_irreducible(BihomogPoly.from_string("S0^2 + S1^2")) is True
        assert is_irreducible(BihomogPoly.from_string("S0^2 - S1^2")) is False
        assert is_irreducible(BihomogPoly.from_string("S0*S1")) is False
        assert is_irreducible(BihomogPoly.from_string("S0^2 - 2*S1^2")) is True
        assert is_irreducible(BihomogPoly.from_string("T0*T1")) is False
        assert is_irreducible(BihomogPoly.from_string("T0^2 + T1^2")) is True

    def test_linear_always(self):
        assert is_irreducible(BihomogPoly.from_string("S0")) is True
        assert is_irreducible(BihomogPoly.from_string("T0 - T1")) is True

    def test_higher_degree_undecided(self):
        assert is_irreducible(BihomogPoly.from_string("S0*T0^2 + S1*T1^2")) is None
        assert is_irreducible(BihomogPoly.from_string("S0^2*T0^2 + S1^2*T1^2")) is None


class TestClassify:
    def test_linear_pair_all_no(self):
        v = classify_segre(coordinate_prime(("X", "V")))
        assert (v.flat, v.universal, v.classical) == ("no", "no", "no")
        assert v.ring_id == "segre"
        assert v.prime_description == "(X, V)"
        assert v.witness.kind == "cohomology"
        assert v.witness.degree == 2
        assert v.witness.ideal == ("X", "V")
        assert v.witness.algebra == "k[X,U,V]/(XU)"
        assert len(v.witness.steps) == 2  # no coordinate change line
        assert v.notes == ("bidegree (1, 0) is one sided",)
        assert v.citations == ("segre-trichotomy", "coherence-local-cohomology",
                               "top-degree-right-exactness")

    def test_sheared_pair_records_change(self):
        v = classify_segre(SegrePrime.linear(1, 1, ORIENT_XY_VU))
        assert v.flat == "no"
        assert len(v.witness.steps) == 3
        assert "coordinate change" in v.witness.steps[0]

    def test_other_orientation_kills_v(self):
        v = classify_segre(coordinate_prime(("X", "Y")))
        assert v.flat == "no"
        assert v.witness.algebra == "k[X,Y,U]/(XU)"
        assert v.notes == ("bidegree (0, 1) is one sided",)

    def test_small_box_still_finds_witness(self):
        v = classify_segre(coordinate_prime(("Y", "U")), box=1)
        assert v.flat == "no"
        assert max(abs(a) for a in v.witness.multidegree) <= 1

    def test_linear_poly_routes_to_pair(self):
        v = classify_segre(SegrePrime.poly("S0"))
        assert (v.flat, v.universal, v.classical) == ("no", "no", "no")
        assert v.prime_description == "(X, V)"
        w = classify_segre(SegrePrime.poly("T0 - T1"))
        assert w.prime_description == "(X - V, Y - U)"

    def test_unbalanced_bidegree_torsion(self):
        v = classify_segre(SegrePrime.poly("S0*T0^2 + S1*T1^2"))
        assert (v.flat, v.universal, v.classical) == ("yes", "no", "no")
        assert v.witness.order is INFINITE
        assert "+1" in v.witness.class_description
        assert any("only checked up to" in n for n in v.notes)
        w = classify_segre(SegrePrime.poly("S0^2*T0 + S1^2*T1",
                                           irreducible=True))
        assert w.universal == "no"
        assert "-1" in w.witness.class_description
        assert any("asserted by caller" in n for n in w.notes)

    def test_balanced_bidegree_principal(self):
        v = classify_segre(SegrePrime.poly("S0*T0 + S1*T1"))
        assert (v.flat, v.universal, v.classical) == ("yes", "yes", "yes")
        assert v.witness.kind == "principal"
        assert v.witness.element == "X + U"
        assert v.notes == ("the prime is principal, so inverting powers of "
                           "the generator gives the classical ring of "
                           "fractions",)

    def test_balanced_higher_degree(self):
        v = classify_segre(SegrePrime.poly("S0^2*T0^2 + S1^2*T1^2",
                                           irreducible=True))
        assert v.classical == "yes"
        assert v.witness.element == "X^2 + U^2"
        assert any("asserted by caller" in n for n in v.notes)

    def test_reducible_rejected(self):
        with pytest.raises(InputError):
            classify_segre(SegrePrime.poly("S0*T0 + S1*T0"))
        with pytest.raises(InputError):
            classify_segre(SegrePrime.poly("S0*S1"))

    def test_one_sided_nonlinear_unknown(self):
        v = classify_segre(SegrePrime.poly("S0^2 + S1^2"))
        assert (v.flat, v.universal, v.classical) == \
            ("unknown", "unknown", "unknown")
        assert v.witness is None
        assert v.citations == ()
        assert not v.conclusive
        assert any("algebraically closed" in n for n in v.notes)

    def test_ring_id_override_and_json(self):
        v = classify_segre(coordinate_prime(("U", "V")), ring_id="segre#cone")
        d = v.to_json_dict()
        assert d["ring"] == "segre#cone"
        assert d["witness"]["type"] == "cohomology"
        assert d["flat"] == "no"
