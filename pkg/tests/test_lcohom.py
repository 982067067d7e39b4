import random
from itertools import combinations, product

import pytest

from uniloc.errors import InputError, PreconditionError
from uniloc.lcohom import (ENUM_VARIABLE_BOUND, MonomialAlgebra,
                           VariableIdeal, _differential, cech_dim,
                           certify_nonvanishing, is_variable_prime,
                           kill_variable, nonvanish_via_quotient,
                           prime_height)

TWOPLANES = MonomialAlgebra.make(("X", "Y", "U"), [{"X", "U"}])
THREE_VARS = MonomialAlgebra.make(("X", "U", "V"), [{"X", "U"}])
PLANE = MonomialAlgebra.make(("X", "Y"))
DIM3 = MonomialAlgebra.make(("X", "Y", "U", "V"), [{"X", "U"}])


def piece_nonzero_local(A, W, a):
    """The graded-piece rule, restated from scratch via the public face test."""
    w = set(W)
    for j, v in enumerate(A.variables):
        if v not in w and a[j] < 0:
            return False
    positive = {v for j, v in enumerate(A.variables) if a[j] > 0}
    return A.is_face(w | positive)


def random_algebra(rng, max_vars=5):
    m = rng.randint(1, max_vars)
    variables = tuple("abcdef"[:m])
    relations = []
    for _ in range(rng.randint(0, 3)):
        size = rng.randint(2, max(2, m))
        r = frozenset(rng.sample(variables, min(size, m)))
        if len(r) < 2:
            continue
        if any(r <= s or s <= r for s in relations):
            continue
        relations.append(r)
    return MonomialAlgebra.make(variables, relations)


class TestAlgebra:
    def test_validation(self):
        with pytest.raises(InputError):
            MonomialAlgebra.make(("X", "X"))
        with pytest.raises(InputError):
            MonomialAlgebra.make(("X",), [set()])
        with pytest.raises(InputError):
            MonomialAlgebra.make(("X",), [{"Z"}])
        with pytest.raises(InputError):
            MonomialAlgebra(("X", "Y"), (frozenset({"X"}), frozenset({"X", "Y"})))

    def test_make_dedupes_relations(self):
        A = MonomialAlgebra.make(("X", "Y"), [{"X", "Y"}, {"Y", "X"}])
        assert len(A.relations) == 1

    def test_describe(self):
        assert TWOPLANES.describe() == "k[X,Y,U]/(XU)"
        assert PLANE.describe() == "k[X,Y]"
        multi = MonomialAlgebra.make(("x1", "x2"), [{"x1", "x2"}])
        assert multi.describe() == "k[x1,x2]/(x1*x2)"

    def test_faces_and_facets(self):
        assert TWOPLANES.is_face(("X", "Y"))
        assert not TWOPLANES.is_face(("X", "U"))
        assert not TWOPLANES.is_face(("X", "Y", "U"))
        assert TWOPLANES.facets() == [("X", "Y"), ("Y", "U")]
        assert TWOPLANES.dimension() == 2
        assert PLANE.facets() == [("X", "Y")]
        assert DIM3.facets() == [("X", "Y", "V"), ("Y", "U", "V")]
        assert DIM3.dimension() == 3

    def test_facet_enumeration_bound(self):
        big = MonomialAlgebra.make(tuple("v%d" % i for i in range(ENUM_VARIABLE_BOUND + 1)))
        with pytest.raises(InputError):
            big.facets()

    def test_index(self):
        assert TWOPLANES.index("U") == 2
        with pytest.raises(InputError):
            TWOPLANES.index("Z")


class TestIdealsAndPrimes:
    def test_variable_ideal(self):
        I = VariableIdeal.of(TWOPLANES, ("Y", "X"))
        assert I.generators == ("X", "Y")
        with pytest.raises(InputError):
            VariableIdeal(())
        with pytest.raises(InputError):
            VariableIdeal(("X", "X"))
        with pytest.raises(InputError):
            VariableIdeal.of(TWOPLANES, ("Z",))

    def test_is_variable_prime(self):
        assert is_variable_prime(TWOPLANES, ("X", "Y"))
        assert is_variable_prime(TWOPLANES, ("X", "U"))  # quotient is k[Y]
        assert not is_variable_prime(TWOPLANES, ("Y",))
        assert is_variable_prime(TWOPLANES, ("X", "Y", "U"))
        assert is_variable_prime(DIM3, ("X", "V"))
        assert not is_variable_prime(DIM3, ("Y", "V"))

    def test_prime_height(self):
        assert prime_height(TWOPLANES, ("X", "Y")) == 1
        assert prime_height(TWOPLANES, ("X", "U")) == 1
        assert prime_height(TWOPLANES, ("X", "Y", "U")) == 2
        assert prime_height(DIM3, ("X", "Y")) == 1
        assert prime_height(DIM3, ("X", "Y", "U", "V")) == 3
        with pytest.raises(InputError):
            prime_height(TWOPLANES, ("Y",))

    def test_kill_variable(self):
        assert kill_variable(TWOPLANES, "Y").describe() == "k[X,U]/(XU)"
        assert kill_variable(TWOPLANES, "U").describe() == "k[X,Y]"
        assert kill_variable(DIM3, "V").describe() == "k[X,Y,U]/(XU)"
        with pytest.raises(InputError):
            kill_variable(TWOPLANES, "Z")


class TestCechDim:
    def test_input_checks(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        with pytest.raises(InputError):
            cech_dim(TWOPLANES, I, -1, (0, 0, 0))
        with pytest.raises(InputError):
            cech_dim(TWOPLANES, I, 1, (0, 0))
        with pytest.raises(InputError):
            cech_dim(TWOPLANES, VariableIdeal(("Z",)), 1, (0, 0, 0))

    def test_beyond_complex_length_is_zero(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        for a in product(range(-2, 3), repeat=3):
            assert cech_dim(TWOPLANES, I, 3, a) == 0

    def test_twoplanes_closed_form_loci(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        for a in product(range(-2, 3), repeat=3):
            ax, ay, au = a
            assert cech_dim(TWOPLANES, I, 0, a) == 0
            h1 = 1 if (ax == 0 and ay < 0 and au > 0) else 0
            assert cech_dim(TWOPLANES, I, 1, a) == h1, a
            h2 = 1 if (ax < 0 and ay < 0 and au == 0) else 0
            assert cech_dim(TWOPLANES, I, 2, a) == h2, a

    def test_three_vars_closed_form_locus(self):
        I = VariableIdeal.of(THREE_VARS, ("X", "V"))
        for a in product(range(-2, 3), repeat=3):
            ax, au, av = a
            h2 = 1 if (ax < 0 and av < 0 and au == 0) else 0
            assert cech_dim(THREE_VARS, I, 2, a) == h2, a

    def test_full_ring_top_cohomology(self):
        for m in (1, 2, 3):
            A = MonomialAlgebra.make(tuple("xyz"[:m]))
            I = VariableIdeal.of(A, A.variables)
            for a in product(range(-2, 3), repeat=m):
                expected = 1 if all(x < 0 for x in a) else 0
                assert cech_dim(A, I, m, a) == expected, (m, a)
                for i in range(m):
                    assert cech_dim(A, I, i, a) == 0, (m, i, a)

    def test_differential_squares_to_zero(self):
        rng = random.Random(1212)
        for _ in range(80):
            A = random_algebra(rng)
            k = rng.randint(0, max(0, len(A.variables) - 2))
            gens = tuple(rng.sample(A.variables, rng.randint(1, len(A.variables))))
            gens = VariableIdeal.of(A, gens).generators
            a = tuple(rng.randint(-2, 2) for _ in A.variables)
            m1, n1_src, n1_tgt = _differential(A, gens, k, a)
            m2, n2_src, n2_tgt = _differential(A, gens, k + 1, a)
            assert n2_src == n1_tgt
            for i in range(n2_tgt):
                for j in range(n1_src):
                    acc = sum(m2[i][t] * m1[t][j] for t in range(n1_tgt))
                    assert acc == 0

    def test_euler_characteristic(self):
        # alternating sums of piece counts and cohomology ranks agree
        rng = random.Random(1313)
        for _ in range(40):
            A = random_algebra(rng, max_vars=4)
            gens = tuple(rng.sample(A.variables, rng.randint(1, len(A.variables))))
            I = VariableIdeal.of(A, gens)
            for _ in range(6):
                a = tuple(rng.randint(-2, 2) for _ in A.variables)
                chi_pieces = 0
                for k in range(len(I.generators) + 1):
                    count = sum(1 for c in combinations(I.generators, k)
                                if piece_nonzero_local(A, c, a))
                    chi_pieces += (-1) ** k * count
                chi_cohom = sum((-1) ** i * cech_dim(A, I, i, a)
                                for i in range(len(I.generators) + 1))
                assert chi_pieces == chi_cohom, (A, I, a)


class TestCertify:
    def test_box_validation(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        with pytest.raises(InputError):
            certify_nonvanishing(TWOPLANES, I, 2, 0)

    def test_beyond_length_identically_zero(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        out = certify_nonvanishing(TWOPLANES, I, 3, 2)
        assert out.identically_zero and not out.found
        assert "identically zero" in out.note

    def test_twoplanes_witnesses(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        h2 = certify_nonvanishing(TWOPLANES, I, 2, 3)
        assert h2.found and h2.witness == (-1, -1, 0) and h2.dim == 1
        h1 = certify_nonvanishing(TWOPLANES, I, 1, 3)
        assert h1.found and h1.witness == (0, -1, 1)
        h0 = certify_nonvanishing(TWOPLANES, I, 0, 2)
        assert not h0.found and not h0.identically_zero
        assert "does not prove vanishing" in h0.note

    def test_three_vars_witness(self):
        I = VariableIdeal.of(THREE_VARS, ("X", "V"))
        out = certify_nonvanishing(THREE_VARS, I, 2, 3)
        assert out.found and out.witness == (-1, 0, -1)

    def test_plane_h1_is_invisible_to_the_scan(self):
        # depth two kills H^1, the scan honestly reports no proof
        I = VariableIdeal.of(PLANE, ("X", "Y"))
        out = certify_nonvanishing(PLANE, I, 1, 3)
        assert not out.found and not out.identically_zero
        top = certify_nonvanishing(PLANE, I, 2, 3)
        assert top.found and top.witness == (-1, -1)

    def test_witness_is_smallest_shell(self):
        I = VariableIdeal.of(TWOPLANES, ("X", "Y"))
        out = certify_nonvanishing(TWOPLANES, I, 2, 3)
        assert max(abs(x) for x in out.witness) == 1


class TestQuotientRoute:
    def test_dim3_cases(self):
        for gens, kill, witness in ((("X", "Y"), "V", (-1, -1, 0)),
                                    (("X", "V"), "Y", (-1, 0, -1))):
            I = VariableIdeal.of(DIM3, gens)
            cert = nonvanish_via_quotient(DIM3, kill, I, 2, box=3)
            assert cert.found
            assert cert.killed == kill
            assert cert.outcome.witness == witness
            assert cert.ideal == gens
            steps = cert.steps()
            assert steps[0].startswith("pass to the quotient")
            assert "right exact" in steps[1]
            assert "witness found" in steps[2]

    def test_top_degree_only(self):
        I = VariableIdeal.of(DIM3, ("X", "Y"))
        with pytest.raises(PreconditionError):
            nonvanish_via_quotient(DIM3, "V", I, 1, box=2)

    def test_cannot_kill_a_generator(self):
        I = VariableIdeal.of(DIM3, ("X", "Y"))
        with pytest.raises(InputError):
            nonvanish_via_quotient(DIM3, "X", I, 2, box=2)
