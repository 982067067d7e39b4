"""Multigraded Cech local cohomology over squarefree monomial algebras.

The ring is k[variables]/(relations) with squarefree monomial
relations; the supported ideals are generated by variables.  Everything
is graded by Z^m, and each graded piece of a localization A_W is either
zero or one-dimensional:

    (A_W)_a is nonzero  iff  a_j >= 0 for every j outside W, and
                             W together with {j : a_j > 0} is a face
                             (contains no relation monomial).

Cohomology in a fixed multidegree is therefore the cohomology of a
small complex of Q-vector spaces with 0/±1 differentials, and ranks are
computed exactly.  Nonvanishing is certified by exhibiting a witness
degree; vanishing is only ever asserted through the complex length
bound, never through box exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import InputError, PreconditionError

ENUM_VARIABLE_BOUND = 16  # facet enumeration is exponential in the variable count


@dataclass(frozen=True)
class MonomialAlgebra:
    variables: tuple
    relations: tuple  # frozensets of variable names, pairwise incomparable

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        rels = [frozenset(r) for r in self.relations]
        known = set(self.variables)
        for r in rels:
            if not r:
                raise InputError("empty relation monomial")
            if not r <= known:
                raise InputError("relation uses unknown variables")
        for r in rels:
            for s in rels:
                if r != s and r <= s:
                    raise InputError("relations must be pairwise incomparable")

    @classmethod
    def make(cls, variables, relations=()) -> "MonomialAlgebra":
        rels = sorted({frozenset(r) for r in relations},
                      key=lambda r: sorted(r))
        return cls(tuple(variables), tuple(rels))

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError("unknown variable %r" % (name,)) from None

    def is_face(self, names) -> bool:
        s = set(names)
        return not any(r <= s for r in self.relations)

    def facets(self):
        if len(self.variables) > ENUM_VARIABLE_BOUND:
            raise InputError("too many variables for facet enumeration")
        faces = []
        for k in range(len(self.variables), -1, -1):
            for combo in combinations(self.variables, k):
                if self.is_face(combo) and not any(set(combo) < set(f) for f in faces):
                    faces.append(tuple(combo))
        maximal = [f for f in faces if not any(set(f) < set(g) for g in faces)]
        return sorted(maximal, key=lambda f: (-len(f), f))

    def dimension(self) -> int:
        return max((len(f) for f in self.facets()), default=0)

    def describe(self) -> str:
        sep = "" if all(len(v) == 1 for v in self.variables) else "*"
        head = "k[%s]" % ",".join(self.variables)
        if not self.relations:
            return head
        rels = ", ".join(sep.join(sorted(r, key=self.index)) for r in self.relations)
        return "%s/(%s)" % (head, rels)

    def __repr__(self):
        return self.describe()


@dataclass(frozen=True)
class VariableIdeal:
    generators: tuple

    def __post_init__(self):
        if not self.generators:
            raise InputError("variable ideal needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise InputError("duplicate generators")

    @classmethod
    def of(cls, algebra: MonomialAlgebra, names) -> "VariableIdeal":
        names = list(names)
        for n in names:
            algebra.index(n)
        ordered = tuple(sorted(set(names), key=algebra.index))
        return cls(ordered)


def is_variable_prime(A: MonomialAlgebra, names) -> bool:
    """The ideal (names) is prime exactly when the complement is a face."""
    comp = [v for v in A.variables if v not in set(names)]
    return A.is_face(comp)


def prime_height(A: MonomialAlgebra, names) -> int:
    """Height of the prime generated by a variable subset.

    Measured along monomial chains: the maximum of |facet| - |complement|
    over facets containing the complement.
    """
    s = set(names)
    comp = frozenset(v for v in A.variables if v not in s)
    if not A.is_face(comp):
        raise InputError("(%s) is not prime here" % ", ".join(sorted(s)))
    heights = [len(f) - len(comp) for f in A.facets() if comp <= set(f)]
    if not heights:
        raise AssertionError("a face must extend to a facet")
    return max(heights)


def kill_variable(A: MonomialAlgebra, name: str) -> MonomialAlgebra:
    """Quotient by one variable: relations involving it become trivial."""
    A.index(name)
    new_vars = tuple(v for v in A.variables if v != name)
    new_rels = [r for r in A.relations if name not in r]
    return MonomialAlgebra.make(new_vars, new_rels)


# the complex ---------------------------------------------------------------

def _piece_nonzero(A: MonomialAlgebra, W, a) -> bool:
    w = set(W)
    for j, v in enumerate(A.variables):
        if v not in w and a[j] < 0:
            return False
    positive = {v for j, v in enumerate(A.variables) if a[j] > 0}
    return A.is_face(w | positive)


def _differential(A: MonomialAlgebra, gens, k, a):
    """Matrix of C^k -> C^{k+1} in multidegree a (rows: targets)."""
    sources = [c for c in combinations(gens, k) if _piece_nonzero(A, c, a)]
    targets = [c for c in combinations(gens, k + 1) if _piece_nonzero(A, c, a)]
    mat = [[0] * len(sources) for _ in targets]
    for col, W in enumerate(sources):
        ws = set(W)
        for g in gens:
            if g in ws:
                continue
            W2 = tuple(sorted(ws | {g}, key=gens.index))
            if W2 not in targets:
                continue
            sign = (-1) ** W2.index(g)
            mat[targets.index(W2)][col] = sign
    return mat, len(sources), len(targets)


def _rank(mat) -> int:
    rows = [[Fraction(x) for x in r] for r in mat if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def cech_dim(A: MonomialAlgebra, I: VariableIdeal, i: int, a) -> int:
    """Dimension over Q of the degree-a piece of H^i_I(A)."""
    if i < 0:
        raise InputError("cohomological degree must be >= 0")
    a = tuple(int(x) for x in a)
    if len(a) != len(A.variables):
        raise InputError("multidegree length mismatch")
    gens = VariableIdeal.of(A, I.generators).generators
    g = len(gens)
    if i > g:
        return 0
    pieces_i = sum(1 for c in combinations(gens, i) if _piece_nonzero(A, c, a))
    dout, _, _ = _differential(A, gens, i, a) if i < g else ([], 0, 0)
    din, _, _ = _differential(A, gens, i - 1, a) if i > 0 else ([], 0, 0)
    return pieces_i - _rank(dout) - _rank(din)


@dataclass(frozen=True)
class NonvanishOutcome:
    """Result of a bounded witness search for H^i != 0."""

    witness: tuple  # multidegree, or None
    dim: int
    box: int
    identically_zero: bool
    note: str

    @property
    def found(self) -> bool:
        return self.witness is not None


def _shell_degrees(m: int, box: int):
    # radius shells, lexicographic inside each shell, so small witnesses win
    for r in range(0, box + 1):
        for a in product(range(-r, r + 1), repeat=m):
            if max((abs(x) for x in a), default=0) == r:
                yield a


def certify_nonvanishing(A: MonomialAlgebra, I: VariableIdeal, i: int,
                         box: int) -> NonvanishOutcome:
    """Scan |a_j| <= box for a degree with cech_dim > 0.

    An empty scan is NOT a vanishing proof and is reported as such; the
    only outright zero conclusion is the complex length bound i > #gens.
    """
    if box < 1:
        raise InputError("box must be >= 1")
    gens = VariableIdeal.of(A, I.generators).generators
    if i > len(gens):
        return NonvanishOutcome(
            None, 0, box, True,
            "degree %d exceeds the %d generators, the complex is that short: "
            "H^%d is identically zero" % (i, len(gens), i))
    for a in _shell_degrees(len(A.variables), box):
        d = cech_dim(A, I, i, a)
        if d > 0:
            return NonvanishOutcome(tuple(a), d, box, False,
                                    "witness found inside box %d" % box)
    return NonvanishOutcome(
        None, 0, box, False,
        "no witness within box %d; this does not prove vanishing" % box)


@dataclass(frozen=True)
class QuotientCertificate:
    """Two-step nonvanishing certificate through a one-variable quotient."""

    original: MonomialAlgebra
    killed: str
    quotient: MonomialAlgebra
    ideal: tuple
    degree: int
    outcome: NonvanishOutcome
    justification: str

    @property
    def found(self) -> bool:
        return self.outcome.found

    def steps(self) -> tuple:
        return (
            "pass to the quotient %s by killing %s" % (self.quotient.describe(), self.killed),
            self.justification,
            self.outcome.note,
        )


def nonvanish_via_quotient(A: MonomialAlgebra, kill: str, I: VariableIdeal,
                           i: int, box: int = 3) -> QuotientCertificate:
    """Certify H^i_I(A) != 0 by certifying it on A/(kill).

    Right-exactness of the top Cech cohomology is what transports the
    witness back, so i must equal the generator count of I.
    """
    gens = VariableIdeal.of(A, I.generators).generators
    if i != len(gens):
        raise PreconditionError(
            "quotient reduction only applies in top degree %d, got %d" % (len(gens), i))
    if kill in gens:
        raise InputError("cannot kill a generator of the ideal")
    quotient = kill_variable(A, kill)
    out = certify_nonvanishing(quotient, VariableIdeal.of(quotient, gens), i, box)
    return QuotientCertificate(
        A, kill, quotient, gens, i, out,
        "top-degree Cech cohomology is right exact, so a nonzero class on the "
        "quotient forces H^%d_(%s) != 0 upstairs" % (i, ", ".join(gens)))
