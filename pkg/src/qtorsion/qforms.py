"""Binary quadratic forms over Z.

A form ``(a, b, c)`` is ``a*x^2 + b*x*y + c*y^2``. Matrices act on forms by
substitution, ``(q o M)(x, y) = q(M @ (x, y))``, so ``(q o A) o B = q o (A @ B)``.

Class groups here are Picard groups of quadratic orders: for ``d > 0`` two
forms lie in the same class when their ideals differ by a principal ideal,
whatever the sign of the generator's norm.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .intlinalg import _xgcd


class DiscriminantError(ValueError):
    pass


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def check_discriminant(d: int) -> None:
    if d % 4 not in (0, 1):
        raise DiscriminantError(f"{d} is not 0 or 1 mod 4")
    if d == 0 or is_square(d):
        raise DiscriminantError(f"{d} is zero or a perfect square")


def is_fundamental(d: int) -> bool:
    try:
        check_discriminant(d)
    except DiscriminantError:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    m = d // 4
    return m % 4 in (2, 3) and _squarefree(m)


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        check_discriminant(self.disc)
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise DiscriminantError(f"{self} is not primitive")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __neg__(self):
        return QuadForm(-self.a, -self.b, -self.c)

    def __str__(self):
        terms = []
        for k, mono in ((self.a, "x^2"), (self.b, "xy"), (self.c, "y^2")):
            if k:
                coef = "" if abs(k) == 1 else str(abs(k))
                terms.append(("- " if k < 0 else "+ ") + coef + mono)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def op(self) -> "QuadForm":
        """The opposite form ``q o diag(1, -1)`` (inverse class)."""
        return QuadForm(self.a, -self.b, self.c)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def substitute(self, m) -> "QuadForm":
        (p, q), (r, s) = m
        a, b, c = self.a, self.b, self.c
        return QuadForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def as_list(self):
        return [self.a, self.b, self.c]


def discriminant(q: QuadForm) -> int:
    return q.disc


# -- 2x2 unimodular matrices as ((p, q), (r, s)) ---------------------------

I2 = ((1, 0), (0, 1))
NEG_I2 = ((-1, 0), (0, -1))
REFLECT = ((1, 0), (0, -1))


def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_det(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_inv(m):
    """Inverse of a unimodular matrix."""
    (a, b), (c, d) = m
    det = a * d - b * c
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((d * det, -b * det), (-c * det, a * det))


def mat_neg(m):
    return tuple(tuple(-x for x in row) for row in m)


def mat_pow(m, k: int):
    if k < 0:
        m, k = mat_inv(m), -k
    out = I2
    while k:
        if k & 1:
            out = mat_mul(out, m)
        m = mat_mul(m, m)
        k >>= 1
    return out


# -- reduction ---------------------------------------------------------------

def _translate(q: QuadForm, k: int):
    return q.substitute(((1, k), (0, 1))), ((1, k), (0, 1))


def _is_reduced_definite(q: QuadForm) -> bool:
    a, b, c = abs(q.a), q.b if q.a > 0 else -q.b, abs(q.c)
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def is_reduced(q: QuadForm) -> bool:
    d = q.disc
    if d < 0:
        return _is_reduced_definite(q)
    r = isqrt(d)
    a = abs(q.a)
    return 0 < q.b <= r and r < 2 * a + q.b and 2 * a - q.b <= r


def _reduce_definite(q: QuadForm):
    neg = q.a < 0
    if neg:
        q = -q
    m = I2
    while True:
        a, b, c = q
        # bring b into (-a, a]
        k = (a - b) // (2 * a)
        if k:
            q = q.substitute(((1, k), (0, 1)))
            m = mat_mul(m, ((1, k), (0, 1)))
        a, b, c = q
        if a > c or (a == c and b < 0):
            q = q.substitute(((0, -1), (1, 0)))
            m = mat_mul(m, ((0, -1), (1, 0)))
            continue
        break
    return (-q if neg else q), m


def rho(q: QuadForm):
    """One step of the indefinite reduction operator, with its matrix."""
    a, b, c = q
    d = q.disc
    r = isqrt(d)
    ac = abs(c)
    # choose b' = -b + 2cs in the normalizing window
    if ac <= r:
        lo = r - 2 * ac  # b' in (lo, r]
        bp = r - ((r + b) % (2 * ac))
        assert lo < bp <= r
    else:
        bp = ac - ((ac + b) % (2 * ac))
    s = (bp + b) // (2 * c)
    m = ((0, -1), (1, s))
    return q.substitute(m), m


def _reduce_indefinite(q: QuadForm):
    m = I2
    steps = 0
    while not is_reduced(q):
        q, step = rho(q)
        m = mat_mul(m, step)
        steps += 1
        if steps > 10_000 + 4 * q.disc.bit_length() ** 2 + abs(q.a).bit_length() * 8:
            raise RuntimeError("indefinite reduction did not terminate")
    return q, m


def reduce(q: QuadForm):
    """Reduced form ``r`` and ``M`` in SL2(Z) with ``q o M == r``."""
    if q.disc < 0:
        return _reduce_definite(q)
    return _reduce_indefinite(q)


def cycle(q: QuadForm):
    """The rho-cycle of a reduced indefinite form.

    Returns a list of ``(form, M)`` with ``q o M == form``; the first entry is
    ``(q, I)``. The matrix closing the cycle is returned separately as a
    proper automorph of ``q``.
    """
    if q.disc < 0 or not is_reduced(q):
        raise ValueError("cycle() needs a reduced indefinite form")
    out = [(q, I2)]
    f, m = q, I2
    while True:
        f, step = rho(f)
        m = mat_mul(m, step)
        if f == q:
            return out, m
        out.append((f, m))


# -- equivalence -------------------------------------------------------------

def proper_equivalence(q1: QuadForm, q2: QuadForm):
    """``M`` in SL2(Z) with ``q1 o M == q2``, or None."""
    if q1.disc != q2.disc:
        raise DiscriminantError("discriminants differ")
    r1, m1 = reduce(q1)
    r2, m2 = reduce(q2)
    if q1.disc < 0:
        if r1 != r2:
            return None
        return mat_mul(m1, mat_inv(m2))
    for f, m in cycle(r1)[0]:
        if f == r2:
            return mat_mul(mat_mul(m1, m), mat_inv(m2))
    return None


def equivalent(q1: QuadForm, q2: QuadForm, allow_det_minus_one: bool = True,
               allow_negation: bool = True):
    """Find ``(gamma, chi)`` with ``chi * (q1 o gamma) / det(gamma) == q2``.

    This is the twisted GL2 action paired with a global sign. Returns None
    when no such pair exists under the allowed options.
    """
    if q1.disc != q2.disc:
        raise DiscriminantError("discriminants differ")
    cands = [(1, 1)]
    if allow_negation:
        cands.append((-1, 1))
    if allow_det_minus_one:
        cands.append((-1, -1))
        if allow_negation:
            cands.append((1, -1))
    for chi, det in cands:
        target = q2 if chi * det == 1 else -q2  # q1 o gamma == chi*det*q2
        if q1.disc < 0 and (target.a > 0) != (q1.a > 0):
            continue
        if det == 1:
            m = proper_equivalence(q1, target)
        else:
            m = proper_equivalence(q1, target.op())
            if m is not None:
                m = mat_mul(m, REFLECT)
        if m is not None:
            return m, chi
    return None


def twisted_act(q: QuadForm, gamma, chi: int = 1) -> QuadForm:
    f = q.substitute(gamma)
    det = mat_det(gamma)
    return QuadForm(chi * det * f.a, chi * det * f.b, chi * det * f.c)


# -- composition -------------------------------------------------------------

def principal_form(d: int) -> QuadForm:
    check_discriminant(d)
    b = d % 2
    return QuadForm(1, b, (b - d) // 4)


def negative_principal_form(d: int) -> QuadForm:
    """A form representing -1 (only meaningful for d > 0)."""
    b = d % 2
    return QuadForm(-1, b, (d - b) // 4)


def positive_representative(q: QuadForm):
    """A properly equivalent form with ``a > 0`` and the matrix reaching it."""
    if q.a > 0:
        return q, I2
    if q.disc < 0:
        raise DiscriminantError("negative definite form has no a > 0 representative")
    r, m = reduce(q)
    for f, mm in cycle(r)[0]:
        if f.a > 0:
            return f, mat_mul(m, mm)
    raise AssertionError("indefinite cycle without a positive leading coefficient")


def _dirichlet(q1: QuadForm, q2: QuadForm) -> QuadForm:
    a1, b1, _ = q1
    a2, b2, _ = q2
    d = q1.disc
    h = (b1 + b2) // 2
    g1, x1, y1 = _xgcd(a1, a2)
    e, x2, z = _xgcd(g1, h)
    lam, mu, nu = x1 * x2, y1 * x2, z
    B = (lam * a1 * b2 + mu * a2 * b1 + nu * (b1 * b2 + d) // 2) // e
    A = a1 * a2 // (e * e)
    B %= 2 * A
    C = (B * B - d) // (4 * A)
    return QuadForm(A, B, C)


def compose(q1: QuadForm, q2: QuadForm) -> QuadForm:
    """Gauss composition, returned as a reduced form."""
    if q1.disc != q2.disc:
        raise DiscriminantError("discriminants differ")
    if q1.disc < 0 and (q1.a < 0 or q2.a < 0):
        raise DiscriminantError("composition needs positive definite forms")
    p1, _ = positive_representative(q1)
    p2, _ = positive_representative(q2)
    return reduce(_dirichlet(p1, p2))[0]


def power(q: QuadForm, n: int) -> QuadForm:
    if n < 0:
        q, n = q.op(), -n
    out = reduce(principal_form(q.disc))[0]
    base = reduce(q)[0]
    while n:
        if n & 1:
            out = compose(out, base)
        base = compose(base, base)
        n >>= 1
    return out


def is_principal_class(q: QuadForm) -> bool:
    """True when the ideal class of ``q`` is trivial (represents +-1)."""
    r, _ = reduce(q)
    if q.disc < 0:
        return r == reduce(principal_form(q.disc))[0]
    return any(abs(f.a) == 1 for f, _ in cycle(r)[0])


def is_n_torsion(q: QuadForm, n: int) -> bool:
    if n <= 0:
        raise ValueError("n must be positive")
    return is_principal_class(power(q, n))


# -- class groups ------------------------------------------------------------

def _definite_reduced_forms(d: int):
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(QuadForm(a, b, c))
        a += 1
    return out


def _indefinite_reduced_forms(d: int):
    r = isqrt(d)
    out = []
    for b in range(1, r + 1):
        if (b - d) % 2:
            continue
        num = b * b - d  # = 4ac < 0
        for a in range((r - b) // 2 + 1, (r + b) // 2 + 1):
            if num % (4 * a):
                continue
            c = num // (4 * a)
            for s in (1, -1):
                if gcd(gcd(a, b), c) == 1:
                    f = QuadForm(s * a, b, s * c)
                    if is_reduced(f):
                        out.append(f)
    return out


def _sort_key(f: QuadForm):
    return (f.a, abs(f.b), -f.b, f.c)


class ClassGroup:
    """Picard group of the order of discriminant ``d`` with its table."""

    def __init__(self, d: int):
        check_discriminant(d)
        self.d = d
        self._index = {}
        if d < 0:
            forms = sorted(_definite_reduced_forms(d), key=_sort_key)
            for i, f in enumerate(forms):
                self._index[f] = i
            self.forms = forms
        else:
            self.forms = self._indefinite_classes(d)
        self.table = [[self.index(compose(f, g)) for g in self.forms] for f in self.forms]
        self.identity = self.index(principal_form(d))

    def _indefinite_classes(self, d):
        seen = {}
        cycles = []
        for f in _indefinite_reduced_forms(d):
            if f in seen:
                continue
            members = [g for g, _ in cycle(f)[0]]
            for g in members:
                seen[g] = len(cycles)
            cycles.append(members)
        kappa = negative_principal_form(d)
        cls_of_cycle = {}
        classes = []
        for ci, members in enumerate(cycles):
            if ci in cls_of_cycle:
                continue
            partner = seen[compose(members[0], kappa)]
            k = len(classes)
            cls_of_cycle[ci] = k
            cls_of_cycle[partner] = k
            pool = cycles[ci] + (cycles[partner] if partner != ci else [])
            rep = min((g for g in pool if g.a > 0), key=lambda g: (g.a, g.b, g.c))
            classes.append(rep)
            for g in pool:
                self._index[g] = k
        order = sorted(range(len(classes)), key=lambda i: _sort_key(classes[i]))
        remap = {old: new for new, old in enumerate(order)}
        self._index = {g: remap[i] for g, i in self._index.items()}
        return [classes[i] for i in order]

    @property
    def order(self) -> int:
        return len(self.forms)

    def index(self, q: QuadForm) -> int:
        return self._index[reduce(q)[0]]

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != self.identity:
            j = self.table[j][i]
            k += 1
        return k

    def inverse(self, i: int) -> int:
        return self.index(self.forms[i].op())

    def torsion(self, n: int) -> list:
        return [i for i in range(self.order) if n % self.element_order(i) == 0]


@lru_cache(maxsize=4096)
def class_group(d: int) -> ClassGroup:
    return ClassGroup(d)


# -- automorphs --------------------------------------------------------------

def _vectors_of_value(q: QuadForm, value: int):
    """All (x, y) with q(x, y) == value for positive definite q."""
    a, b, c = q
    d = -q.disc
    # 4a*q = (2ax + by)^2 + d*y^2
    ymax = isqrt(4 * a * value // d) if d else 0
    out = []
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * value - d * y * y
        if rest < 0:
            continue
        s = isqrt(rest)
        if s * s != rest:
            continue
        for t in {s, -s}:
            if (t - b * y) % (2 * a) == 0:
                out.append(((t - b * y) // (2 * a), y))
    return out


def definite_automorphs(q: QuadForm) -> list:
    """All ``gamma`` in GL2(Z) with ``q o gamma == q`` (d < 0)."""
    if q.disc >= 0:
        raise ValueError("finite automorph group needs a definite form")
    p = q if q.a > 0 else -q
    firsts = _vectors_of_value(p, p.a)
    seconds = _vectors_of_value(p, p.c)
    out = []
    for x1, y1 in firsts:
        for x2, y2 in seconds:
            g = ((x1, x2), (y1, y2))
            if mat_det(g) in (1, -1) and p.substitute(g) == p:
                out.append(g)
    return sorted(out)


def pell_unit(d: int):
    """Fundamental solution ``(t, u)`` of ``t^2 - d*u^2 = +-4`` with ``u > 0``.

    The unit ``(t + u*sqrt(d))/2`` is the fundamental unit of the order of
    discriminant ``d``. Computed from the cycle of the principal form.
    """
    if d <= 0:
        raise DiscriminantError("Pell unit needs d > 0")
    check_discriminant(d)
    q, m0 = reduce(principal_form(d))
    _, aut = cycle(q)
    t, u = _unit_of_automorph(q, aut)
    if t < 0:
        t, u = -t, -u
    u = abs(u)
    # the cycle automorph belongs to the smallest norm +1 unit; test for a
    # norm -1 square root (t'^2 = t - 2, d*u'^2 = t + 2)
    if is_square(t - 2) and (t + 2) % d == 0 and is_square((t + 2) // d):
        t2, u2 = isqrt(t - 2), isqrt((t + 2) // d)
        if t2 * u2 == u and t2 * t2 - d * u2 * u2 == -4:
            return t2, u2
    return t, u


def _unit_of_automorph(q: QuadForm, m):
    (p, _), (r, s) = m
    a = q.a
    return p + s, r // a


def automorph_of_unit(q: QuadForm, t: int, u: int):
    """The matrix on q's variables corresponding to ``(t + u*sqrt(d))/2``."""
    a, b, c = q
    return (((t - b * u) // 2, -c * u), (a * u, (t + b * u) // 2))


def automorph_generators(q: QuadForm) -> list:
    """Generators ``(gamma, chi)`` of ``{chi * (q o gamma)/det gamma == q}``.

    For definite forms every element of the finite group is listed. For
    indefinite forms the list holds ``-I``, the hyperbolic automorph of the
    fundamental unit, and one improper element when one exists.
    """
    d = q.disc
    if d < 0:
        return [(g, mat_det(g)) for g in definite_automorphs(q)]
    t, u = pell_unit(d)
    hyp = automorph_of_unit(q, t, u)
    out = [(NEG_I2, 1), (hyp, _chi_of(q, hyp))]
    r = improper_automorph(q)
    if r is not None:
        out.append(r)
    return out


def _chi_of(q: QuadForm, g) -> int:
    f = q.substitute(g)
    det = mat_det(g)
    if f == q:
        return det
    if f == -q:
        return -det
    raise ValueError("matrix does not fix q up to sign")


def improper_automorph(q: QuadForm):
    """An element ``(gamma, -1)`` of the twisted stabilizer of q, if any."""
    for target, det in ((-q, 1), (q.op(), -1)):
        if q.disc < 0 and target.a < 0:
            continue
        m = proper_equivalence(q, target)
        if m is not None:
            if det == -1:
                m = mat_mul(m, REFLECT)
            return m, -1
    return None
