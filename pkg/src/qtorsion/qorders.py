"""Arithmetic in the quadratic order of discriminant d.

Elements are ``u + v*w`` with ``w = (d + sqrt(d))/2``. Ideals are stored in
the lower-triangular Hermite form ``Z*A + Z*(B + C*w)`` with ``0 <= B < A``.
"""

from dataclasses import dataclass
from math import gcd

from . import qforms
from .intlinalg import hnf, lagrange_gauss
from .qforms import DiscriminantError, QuadForm, check_discriminant


class OrderMismatch(ValueError):
    pass


class ScopeError(ValueError):
    """Operation needs a fundamental discriminant."""


class ResourceError(RuntimeError):
    pass


class NotInvertible(ValueError):
    pass


@dataclass(frozen=True)
class OrderElem:
    d: int
    u: int
    v: int

    @classmethod
    def from_int(cls, d: int, k: int) -> "OrderElem":
        return cls(d, k, 0)

    @classmethod
    def from_sqrt(cls, d: int, x2: int, y: int) -> "OrderElem":
        """The element ``(x2 + y*sqrt(d))/2``; must lie in the order."""
        if (x2 - y * d) % 2:
            raise ValueError("(x + y sqrt d)/2 is not in the order")
        return cls(d, (x2 - y * d) // 2, y)

    def _check(self, other):
        if not isinstance(other, OrderElem):
            return OrderElem(self.d, int(other), 0)
        if other.d != self.d:
            raise OrderMismatch("elements of different orders")
        return other

    def __add__(self, other):
        o = self._check(other)
        return OrderElem(self.d, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return OrderElem(self.d, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return OrderElem(self.d, -self.u, -self.v)

    def __mul__(self, other):
        o = self._check(other)
        d = self.d
        # w^2 = d*w - (d^2 - d)/4
        k = (d * d - d) // 4
        vv = self.v * o.v
        return OrderElem(d, self.u * o.u - k * vv, self.u * o.v + self.v * o.u + d * vv)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave the order")
        out = OrderElem(self.d, 1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "OrderElem":
        return OrderElem(self.d, self.u + self.v * self.d, -self.v)

    def norm(self) -> int:
        d = self.d
        return self.u * self.u + d * self.u * self.v + (d * d - d) // 4 * self.v * self.v

    def trace(self) -> int:
        return 2 * self.u + self.d * self.v

    def sqrt_coords(self):
        """``(x2, y)`` with ``self == (x2 + y*sqrt(d))/2``."""
        return 2 * self.u + self.v * self.d, self.v

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def divides(self, other) -> bool:
        return self.exact_div(other, strict=False) is not None

    def exact_div(self, other, strict: bool = True):
        """``other / self`` when it lies in the order."""
        o = self._check(other)
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        num = o * self.conj()
        if num.u % n or num.v % n:
            if strict:
                raise ValueError("quotient is not in the order")
            return None
        return OrderElem(self.d, num.u // n, num.v // n)

    def __str__(self):
        x2, y = self.sqrt_coords()
        return f"({x2} + {y}*sqrt({self.d}))/2"


def elem(d: int, u: int, v: int = 0) -> OrderElem:
    return OrderElem(d, u, v)


def omega(d: int) -> OrderElem:
    return OrderElem(d, 0, 1)


# -- ideals ------------------------------------------------------------------

@dataclass(frozen=True)
class OrderIdeal:
    d: int
    A: int
    B: int
    C: int

    @classmethod
    def from_generators(cls, d: int, gens) -> "OrderIdeal":
        """The Z-module spanned by ``gens`` and ``gens * w``."""
        w = omega(d)
        rows = []
        for g in gens:
            for h in (g, g * w):
                rows.append([h.v, h.u])
        return cls.from_module(d, rows)

    @classmethod
    def from_module(cls, d: int, rows) -> "OrderIdeal":
        """From Z-spanning vectors ``[v, u]`` of a full-rank ideal."""
        h, _ = hnf(rows)
        if len(rows) < 2 or not h[0][0] or not h[1][1]:
            raise ValueError("ideal is not of full rank")
        C, B = h[0]
        A = h[1][1]
        return cls(d, A, B % A, C)

    @classmethod
    def unit(cls, d: int) -> "OrderIdeal":
        return cls(d, 1, 0, 1)

    def basis(self):
        return OrderElem(self.d, self.A, 0), OrderElem(self.d, self.B, self.C)

    def norm(self) -> int:
        return self.A * self.C

    def __contains__(self, x: OrderElem) -> bool:
        if x.v % self.C:
            return False
        k = x.v // self.C
        return (x.u - k * self.B) % self.A == 0

    def __mul__(self, other: "OrderIdeal") -> "OrderIdeal":
        return ideal_mul(self, other)

    def is_ideal(self) -> bool:
        w = omega(self.d)
        return all(g * w in self for g in self.basis())


def ideal_mul(I: OrderIdeal, J: OrderIdeal) -> OrderIdeal:
    if I.d != J.d:
        raise OrderMismatch("ideals of different orders")
    prods = [g * h for g in I.basis() for h in J.basis()]
    return OrderIdeal.from_module(I.d, [[p.v, p.u] for p in prods])


def ideal_pow(I: OrderIdeal, n: int) -> OrderIdeal:
    if n < 0:
        raise ValueError("negative ideal powers are fractional")
    out = OrderIdeal.unit(I.d)
    base = I
    while n:
        if n & 1:
            out = ideal_mul(out, base)
        base = ideal_mul(base, base)
        n >>= 1
    return out


def principal_ideal(g: OrderElem) -> OrderIdeal:
    return OrderIdeal.from_generators(g.d, [g])


def ideal_conj(I: OrderIdeal) -> OrderIdeal:
    return OrderIdeal.from_generators(I.d, [g.conj() for g in I.basis()])


# -- the form <-> ideal dictionary --------------------------------------------

@dataclass(frozen=True)
class FormIdealData:
    q: QuadForm
    alpha: OrderElem
    beta: OrderElem
    ideal: OrderIdeal
    norm: int


def ideal_from_form(q: QuadForm) -> FormIdealData:
    """``I_q = Z*a + Z*(-b + sqrt d)/2`` with generators ``alpha``, ``beta``."""
    if q.a <= 0:
        raise ValueError("ideal_from_form needs a > 0; normalize the form first")
    d = q.disc
    alpha = OrderElem.from_sqrt(d, -q.b, 1)
    beta = OrderElem(d, q.a, 0)
    ideal = OrderIdeal.from_module(d, [[0, q.a], [alpha.v, alpha.u]])
    return FormIdealData(q, alpha, beta, ideal, q.a)


def form_from_ideal(I: OrderIdeal) -> QuadForm:
    """Primitive form attached to the primitive part of ``I``."""
    if I.A % I.C or I.B % I.C:
        raise NotInvertible("ideal does not have the expected shape")
    a = I.A // I.C
    b = -(2 * (I.B // I.C) + I.d)
    num = b * b - I.d
    if num % (4 * a):
        raise NotInvertible("ideal is not invertible")
    return QuadForm(a, b, num // (4 * a))


def ideal_form(I: OrderIdeal):
    """``N(x*g1 + y*g2)/N(I)`` on the stored basis ``(g1, g2)``."""
    g1, g2 = I.basis()
    n = I.norm()
    A, B, C = g1.norm(), (g1 * g2.conj()).trace(), g2.norm()
    if A % n or B % n or C % n:
        raise NotInvertible("ideal is not invertible")
    return (A // n, B // n, C // n), (g1, g2)


# -- principal ideals --------------------------------------------------------

def principal_generator(I: OrderIdeal):
    """A generator of ``I`` when it is principal, else None."""
    d = I.d
    if d < 0:
        g1, g2 = I.basis()
        k = (d * d - d) // 4
        v1, _ = lagrange_gauss([[g1.u, g1.v], [g2.u, g2.v]], (1, d, k))
        g = OrderElem(d, v1[0], v1[1])
        return g if g.norm() == I.norm() else None
    (fa, fb, fc), (g1, g2) = ideal_form(I)
    if gcd(gcd(fa, fb), fc) != 1:
        raise NotInvertible("ideal is not invertible")
    f = QuadForm(fa, fb, fc)
    r, m = qforms.reduce(f)
    for h, mm in qforms.cycle(r)[0]:
        if abs(h.a) == 1:
            x, y = qforms.mat_mul(m, mm)[0][0], qforms.mat_mul(m, mm)[1][0]
            return g1 * x + g2 * y
    return None


# -- units -------------------------------------------------------------------

def unit_torsion(d: int) -> int:
    if d >= 0:
        raise DiscriminantError("torsion count is for d < 0")
    check_discriminant(d)
    return {-3: 6, -4: 4}.get(d, 2)


def torsion_generator(d: int) -> OrderElem:
    """A generator of the roots of unity in the order."""
    if d in (-3, -4):
        return OrderElem(d, 2, 1)
    return OrderElem(d, -1, 0)


def fundamental_unit(d: int) -> OrderElem:
    if d <= 0:
        raise DiscriminantError("fundamental unit is for d > 0")
    t, u = qforms.pell_unit(d)
    return OrderElem.from_sqrt(d, t, u)


def unit_group(d: int):
    """``(torsion generator, its order, fundamental unit or None)``."""
    if d < 0:
        return torsion_generator(d), unit_torsion(d), None
    return OrderElem(d, -1, 0), 2, fundamental_unit(d)


def _big_side(x: OrderElem) -> int:
    """Sign of ``|x1| - |x2|`` for the two real embeddings (d > 0)."""
    x2, y = x.sqrt_coords()
    s = x2 * y
    return (s > 0) - (s < 0)


def unit_log(x: OrderElem):
    """Exponents ``(a, b)`` with ``x == zeta**a * eps**b``.

    ``zeta`` and ``eps`` are as in :func:`unit_group`; ``b`` is 0 for d < 0.
    """
    if not x.is_unit():
        raise ValueError("not a unit")
    d = x.d
    z, w, eps = unit_group(d)
    if eps is None:
        p = OrderElem(d, 1, 0)
        for a in range(w):
            if p == x:
                return a, 0
            p = p * z
        raise AssertionError("unit outside the torsion group")
    b = 0
    cur = x
    inv_eps = eps.exact_div(OrderElem(d, 1, 0))
    while _big_side(cur) > 0:
        cur = cur * inv_eps
        b += 1
    while _big_side(cur) < 0:
        cur = cur * eps
        b -= 1
    if cur == OrderElem(d, 1, 0):
        return 0, b
    if cur == OrderElem(d, -1, 0):
        return 1, b
    raise AssertionError("unit not in <-1, eps>")


def canonical_associate(g: OrderElem) -> OrderElem:
    """Deterministic representative of ``g`` up to units.

    d < 0: lexicographically least ``(u, v)`` among associates. d > 0: the
    associate with positive first embedding and ``1 <= |g1/g2| < eps1^2``.
    """
    d = g.d
    if d < 0:
        z = torsion_generator(d)
        best = g
        cur = g
        for _ in range(unit_torsion(d) - 1):
            cur = cur * z
            if (cur.u, cur.v) < (best.u, best.v):
                best = cur
        return best
    eps = fundamental_unit(d)
    one = OrderElem(d, 1, 0)
    inv_eps = eps.exact_div(one)
    while _big_side(g) < 0:
        g = g * eps
    while _big_side(g * inv_eps) >= 0:
        g = g * inv_eps
    if _first_embedding_sign(g) < 0:
        g = -g
    return g


def _first_embedding_sign(x: OrderElem) -> int:
    """Sign of ``(x2 + y*sqrt d)/2`` with the positive square root."""
    x2, y = x.sqrt_coords()
    if x2 >= 0 and y >= 0:
        return (x2 > 0 or y > 0) - 0
    if x2 <= 0 and y <= 0:
        return -1 if (x2 or y) else 0
    # opposite signs: compare x2^2 with d*y^2
    lhs, rhs = x2 * x2, x.d * y * y
    if lhs == rhs:
        return 0
    big = x2 if lhs > rhs else y
    return 1 if big > 0 else -1


# -- evaluation of binary forms ---------------------------------------------

def evaluate_binform(delta, data: FormIdealData) -> OrderElem:
    """``sum t_i alpha^i beta^(n-i)`` for ``delta = sum t_i x^i y^(n-i)``."""
    coeffs = list(getattr(delta, "coeffs", delta))
    return evaluate_at(coeffs, data.alpha, data.beta)


def evaluate_at(coeffs, x: OrderElem, y: OrderElem) -> OrderElem:
    n = len(coeffs) - 1
    d = x.d
    out = OrderElem(d, 0, 0)
    xp = [OrderElem(d, 1, 0)]
    for _ in range(n):
        xp.append(xp[-1] * x)
    yp = OrderElem(d, 1, 0)
    for i in range(n, -1, -1):
        if coeffs[i]:
            out = out + xp[i] * yp * coeffs[i]
        yp = yp * y
    return out


# -- n-th powers ---------------------------------------------------------------

MAX_FACTOR_BITS = 256


def _factor(n: int) -> dict:
    if n.bit_length() > MAX_FACTOR_BITS:
        raise ResourceError(f"refusing to factor a {n.bit_length()}-bit norm")
    from sympy import factorint

    return factorint(n)


def prime_ideals_above(p: int, d: int) -> list:
    """Prime ideals of the maximal order over ``p`` (d fundamental)."""
    k = (d * d - d) // 4
    roots = [r for r in _poly_roots_mod(d, k, p)]
    if not roots:
        return [OrderIdeal(d, p, 0, p)]
    out = []
    for r in roots:
        out.append(OrderIdeal.from_generators(d, [OrderElem(d, p, 0), OrderElem(d, -r, 1)]))
    return out


def _poly_roots_mod(d: int, k: int, p: int) -> list:
    """Roots of ``t^2 - d*t + k`` modulo the prime ``p``."""
    if p < 1000:
        return [t for t in range(p) if (t * t - d * t + k) % p == 0]
    from sympy.ntheory import sqrt_mod

    s = sqrt_mod(d % p, p, all_roots=True) or []
    inv2 = pow(2, -1, p)
    return sorted({(d + r) * inv2 % p for r in s})


def valuation(x: OrderElem, P: OrderIdeal, bound: int) -> int:
    k = 0
    power = OrderIdeal.unit(x.d)
    while k < bound:
        nxt = ideal_mul(power, P)
        if x not in nxt:
            break
        power = nxt
        k += 1
    return k


def nth_power_classify(x: OrderElem, n: int, allowed_signs=(1,)):
    """Find ``y`` with ``s * y**n == x`` for some allowed sign ``s``.

    Returns ``(y, s)`` or None. Requires a fundamental discriminant since
    the ideal ``(x)`` is factored into prime ideals.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if x.is_zero():
        raise ValueError("zero has no class")
    d = x.d
    if not qforms.is_fundamental(d):
        raise ScopeError("nth_power_classify needs a fundamental discriminant")
    if n == 1:
        return (x, 1) if 1 in allowed_signs else (-x, -1)
    N = abs(x.norm())
    J = OrderIdeal.unit(d)
    for p, e in _factor(N).items():
        for P in prime_ideals_above(p, d):
            v = valuation(x, P, e)
            if v % n:
                return None
            if v:
                J = ideal_mul(J, ideal_pow(P, v // n))
    y0 = principal_generator(J)
    if y0 is None:
        return None
    unit = (y0 ** n).exact_div(x)
    a, b = unit_log(unit)
    z, w, eps = unit_group(d)
    one = OrderElem(d, 1, 0)
    # unit = s * root**n with root = z**i * eps**j
    for s in allowed_signs:
        for i in range(w):
            if eps is not None:
                if b % n:
                    continue
                j = b // n
                root = z ** i * (eps ** j if j >= 0 else eps.exact_div(one) ** (-j))
            else:
                root = z ** i
            if (root ** n) * s == unit:
                y = y0 * root
                assert (y ** n) * s == x
                return y, s
    return None
