"""Ideal arithmetic and class groups of imaginary quadratic maximal orders.

Ideals are kept in the standard form scale * (a*Z + ((b + sqrt(D))/2)*Z)
with b^2 = D mod 4a and -a < b <= a.  Only maximal orders of imaginary
fields are supported: the unit group is finite and form reduction gives
an exact, terminating principal-ideal test with generator extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import InputError
from .verdict import (Denominators, Verdict, YES, check_citations,
                      render_rational)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class QuadOrder:
    d: int  # squarefree, negative

    def __post_init__(self):
        if self.d >= 0:
            raise InputError("d must be negative (imaginary field)")
        if not _is_squarefree(self.d):
            raise InputError("d must be squarefree")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def _parity(self) -> int:
        # parity of every admissible b, equals D mod 2
        return self.discriminant % 2

    def omega_symbol(self) -> str:
        # the module generator printed in element output
        if self._parity:
            return "(1+sqrt(%d))/2" % self.d
        return "sqrt(%d)" % self.d

    def __repr__(self):
        return "QuadOrder(d=%d, D=%d)" % (self.d, self.discriminant)


@dataclass(frozen=True)
class QuadElement:
    """x + y*w where w = sqrt(d), or (1+sqrt(d))/2 when d = 1 mod 4."""

    order: QuadOrder
    x: Fraction
    y: Fraction

    def norm(self) -> Fraction:
        x, y, d = Fraction(self.x), Fraction(self.y), self.order.d
        if self.order._parity:
            return x * x + x * y + y * y * Fraction(1 - d, 4)
        return x * x - d * y * y

    def __repr__(self):
        return render_element(self)


def render_element(e: QuadElement) -> str:
    x, y = Fraction(e.x), Fraction(e.y)
    if y == 0:
        return render_rational(x)
    if e.order._parity:
        # rewrite over the common denominator 2 in terms of sqrt(d)
        p, q = 2 * x + y, y
        if p.denominator == 1 and q.denominator == 1 \
                and p.numerator % 2 == 0 and q.numerator % 2 == 0:
            return _render_sqrt_form(p / 2, q / 2, e.order.d)
        return "(%s)/2" % _render_sqrt_form(p, q, e.order.d)
    return _render_sqrt_form(x, y, e.order.d)


def _render_sqrt_form(p, q, d):
    root = "sqrt(%d)" % d
    qs = render_rational(abs(q))
    tail = root if abs(q) == 1 else "%s*%s" % (qs, root)
    if p == 0:
        return ("-" if q < 0 else "") + tail
    sign = "-" if q < 0 else "+"
    return "%s%s%s" % (render_rational(p), sign, tail)


@dataclass(frozen=True)
class QuadIdeal:
    order: QuadOrder
    a: int
    b: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        D = self.order.discriminant
        if self.a <= 0:
            raise InputError("ideal norm part must be positive")
        if self.scale <= 0:
            raise InputError("ideal scale must be positive")
        if (self.b * self.b - D) % (4 * self.a) != 0:
            raise InputError("b^2 = D mod 4a fails")
        if not (-self.a < self.b <= self.a):
            raise InputError("b out of canonical range")

    def __repr__(self):
        s = "" if self.scale == 1 else "%s*" % render_rational(self.scale)
        return "%s(%d, %s)" % (s, self.a, render_element(self.second_generator()))

    def second_generator(self) -> QuadElement:
        # (b + sqrt(D))/2 expressed in the 1, w basis
        shift = (self.b - self.order._parity) // 2
        return QuadElement(self.order, Fraction(shift), Fraction(1))

    @property
    def c(self) -> int:
        D = self.order.discriminant
        return (self.b * self.b - D) // (4 * self.a)

    def form(self):
        return (self.a, self.b, self.c)


def make_ideal(order: QuadOrder, a: int, b: int, scale=Fraction(1)) -> QuadIdeal:
    # canonicalizes b into (-a, a]
    bb = b % (2 * a)
    if bb > a:
        bb -= 2 * a
    return QuadIdeal(order, a, bb, Fraction(scale))


def unit_ideal(order: QuadOrder) -> QuadIdeal:
    return make_ideal(order, 1, order._parity)


def contains(I: QuadIdeal, e: QuadElement) -> bool:
    """Exact membership test against the standard basis of I."""
    x, y = Fraction(e.x) / I.scale, Fraction(e.y) / I.scale
    if x.denominator != 1 or y.denominator != 1:
        return False
    shift = (I.b - I.order._parity) // 2
    return (x.numerator - y.numerator * shift) % I.a == 0


def ideal_norm(I: QuadIdeal) -> Fraction:
    return Fraction(I.scale) ** 2 * I.a


def _xgcd(a: int, b: int):
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _xgcd(b, a % b)
    return (g, y, x - (a // b) * y)


def ideal_mul(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    """Product in canonical form; multiplicative on norms."""
    if I.order != J.order:
        raise InputError("ideals from different orders")
    D = I.order.discriminant
    a1, b1 = I.a, I.b
    a2, b2 = J.a, J.b
    s = (b1 + b2) // 2
    g1, x1, y1 = _xgcd(a1, a2)
    e, x2, w = _xgcd(g1, s)
    u, v = x1 * x2, y1 * x2
    # u*a1 + v*a2 + w*s == e == gcd(a1, a2, s)
    a3 = (a1 // e) * (a2 // e)
    num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    if num % e != 0:
        raise AssertionError("composition numerator not divisible")
    b3 = num // e
    return make_ideal(I.order, a3, b3, I.scale * J.scale * e)


def ideal_pow(I: QuadIdeal, n: int) -> QuadIdeal:
    if n < 0:
        raise InputError("negative ideal powers not needed here")
    out = unit_ideal(I.order)
    for _ in range(n):
        out = ideal_mul(out, I)
    return out


def reduce(I: QuadIdeal) -> QuadIdeal:
    """Reduced representative of the class of I (scale dropped)."""
    a, b, c = I.form()
    while True:
        bb = b % (2 * a)
        if bb > a:
            bb -= 2 * a
        b = bb
        c = (b * b - I.order.discriminant) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return QuadIdeal(I.order, a, b)


def is_principal(I: QuadIdeal):
    """Generator of I if principal, else None.

    The class test is form reduction; the generator comes from a bounded
    enumeration of elements with |norm| = N(I), filtered by membership.
    """
    if reduce(I) != unit_ideal(I.order):
        return None
    target = I.a  # norm of the primitive part
    d = I.order.d
    parity = I.order._parity
    ymax = isqrt(4 * target // abs(d)) + 1
    xmax = isqrt(target) + (ymax + 1) // 2 + 1
    for y in range(0, ymax + 1):
        for x in range(0, xmax + 1):
            if parity:
                nrm = x * x + x * y + y * y * (1 - d) // 4
                nrm_m = x * x - x * y + y * y * (1 - d) // 4
            else:
                nrm = x * x - d * y * y
                nrm_m = nrm
            for sx, sy, n in ((1, 1, nrm), (1, -1, nrm_m), (-1, 1, nrm_m), (-1, -1, nrm)):
                if x == 0 and sx < 0:
                    continue
                if y == 0 and sy < 0:
                    continue
                if x == 0 and y == 0:
                    continue
                if n != target:
                    continue
                cand = QuadElement(I.order, Fraction(sx * x) * I.scale, Fraction(sy * y) * I.scale)
                if contains(I, cand):
                    return cand
    return None


# prime decomposition ------------------------------------------------------

@dataclass(frozen=True)
class Split:
    p: QuadIdeal
    pbar: QuadIdeal


@dataclass(frozen=True)
class Inert:
    ell: int


@dataclass(frozen=True)
class Ramified:
    p: QuadIdeal


def _symbol(D: int, ell: int) -> int:
    # Kronecker symbol (D/ell) for prime ell
    if ell == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % ell
    if r == 0:
        return 0
    return 1 if pow(r, (ell - 1) // 2, ell) == 1 else -1


def decompose_prime(order: QuadOrder, ell: int):
    """Split / Inert / Ramified behaviour of a rational prime.

    The orders here are maximal, so the conductor is 1 and no prime is
    excluded.
    """
    if not _is_prime(ell):
        raise InputError("%r is not a rational prime" % (ell,))
    D = order.discriminant
    sym = _symbol(D, ell)
    if sym == -1:
        return Inert(ell)
    # find b in (-ell, ell] with b^2 = D mod 4*ell
    hit = None
    for b in range(-ell + 1, ell + 1):
        if (b * b - D) % (4 * ell) == 0:
            if hit is None or b > 0:
                hit = b
        if hit is not None and hit > 0:
            break
    if hit is None:
        raise AssertionError("no square root found despite symbol %d" % sym)
    p = make_ideal(order, ell, hit)
    if sym == 0:
        return Ramified(p)
    return Split(p, make_ideal(order, ell, -hit))


def inert_ideal(order: QuadOrder, ell: int) -> QuadIdeal:
    return make_ideal(order, 1, order._parity, Fraction(ell))


# class group --------------------------------------------------------------

def reduced_forms(order: QuadOrder):
    """All reduced primitive forms (a, b, c) of the discriminant."""
    D = order.discriminant
    out = []
    amax = isqrt(abs(D) // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) != 0:
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


def class_number(order: QuadOrder) -> int:
    return len(reduced_forms(order))


def class_order(I: QuadIdeal) -> int:
    """Least n >= 1 with I^n principal."""
    base = reduce(I)
    unit = unit_ideal(I.order)
    acc = base
    n = 1
    bound = class_number(I.order)
    while acc != unit:
        acc = reduce(ideal_mul(acc, base))
        n += 1
        if n > bound:
            raise AssertionError("class order exceeded the class number")
    return n


def is_prime_ideal(I: QuadIdeal) -> bool:
    if I.scale == 1 and _is_prime(I.a):
        return True  # norm is prime
    if I.a == 1 and I.scale.denominator == 1 and _is_prime(I.scale.numerator):
        return _symbol(I.order.discriminant, I.scale.numerator) == -1
    return False


def classify_dedekind(order: QuadOrder, primes, labels=None) -> Verdict:
    """Verdict for V = the given set of maximal ideals.

    Krull dimension one makes every specialisation closed set the support
    of a flat epimorphism which is also universal; finiteness of the
    class group always produces classical denominators.
    """
    primes = list(primes)
    for P in primes:
        if P.order != order:
            raise InputError("prime from a different order")
        if not is_prime_ideal(P):
            raise InputError("non-prime ideal in V: %r" % (P,))
    if labels is not None and len(labels) != len(primes):
        raise InputError("label count mismatch")

    elements = []
    details = []
    for idx, P in enumerate(primes):
        label = labels[idx] if labels else repr(P)
        if P.a == 1:  # inert principal prime (ell)
            n = 1
            gen = QuadElement(order, Fraction(P.scale), Fraction(0))
        else:
            n = class_order(P)
            gen = is_principal(ideal_pow(P, n))
            if gen is None:
                raise AssertionError("p^order must be principal")
        elements.append(render_element(gen))
        details.append((("prime", label), ("class_order", n),
                        ("generator", render_element(gen))))

    desc = ", ".join(labels) if labels else ", ".join(repr(P) for P in primes)
    notes = []
    if not primes:
        notes.append("V is empty: the identity localisation")
    notes.append("Krull dimension one: flat epimorphisms, universal and "
                 "classical localisations all coincide here")
    return Verdict(
        ring_id="quad:%d" % order.d,
        prime_description="{%s}" % desc,
        flat=YES, universal=YES, classical=YES,
        witness=Denominators(tuple(elements), tuple(details)),
        citations=check_citations((
            "dim-le-one-flat-equals-universal",
            "picard-torsion-collapse",
            "dedekind-classical-generator",
            "classical-support-union",
        )),
        notes=tuple(notes),
    )
