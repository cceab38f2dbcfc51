"""Binary forms of degree n, resultants against quadratic forms, and the
group of pairs ``(q, delta)``.

A form ``BinForm((t0, ..., tn))`` means ``sum t_i x^i y^(n-i)``.
"""

from dataclasses import dataclass
from math import gcd

from . import qforms
from .intlinalg import bareiss_det, hnf
from .qforms import QuadForm, mat_det, mat_inv, mat_mul, mat_neg


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class BinForm:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(t) for t in self.coeffs)
        if not c:
            raise DegreeError("a binary form needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int) -> "BinForm":
        return cls((0,) * (n + 1))

    @classmethod
    def monomial(cls, n: int, i: int, coeff: int = 1) -> "BinForm":
        """``coeff * x^i y^(n-i)``."""
        c = [0] * (n + 1)
        c[i] = coeff
        return cls(c)

    @classmethod
    def from_quad(cls, q: QuadForm) -> "BinForm":
        return cls((q.c, q.b, q.a))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _same(self, other):
        if other.degree != self.degree:
            raise DegreeError("degrees differ")

    def __add__(self, other):
        self._same(other)
        return BinForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same(other)
        return BinForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return BinForm(tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "BinForm":
        return BinForm(tuple(k * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, QuadForm):
            other = BinForm.from_quad(other)
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return BinForm(out)

    __rmul__ = __mul__

    def __call__(self, x, y):
        n = self.degree
        return sum(t * x ** i * y ** (n - i) for i, t in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def substitute(self, m) -> "BinForm":
        """``delta(p x + q y, r x + s y)`` for ``m = ((p, q), (r, s))``."""
        (p, q), (r, s) = m
        n = self.degree
        out = [0] * (n + 1)
        # powers of the two linear forms as coefficient lists in x
        lx = [[1]]
        ly = [[1]]
        for _ in range(n):
            lx.append(_poly_mul(lx[-1], [q, p]))
            ly.append(_poly_mul(ly[-1], [s, r]))
        for i, t in enumerate(self.coeffs):
            if t:
                for k, c in enumerate(_poly_mul(lx[i], ly[n - i])):
                    out[k] += t * c
        return BinForm(out)

    def divide(self, q) -> "BinForm":
        """Exact quotient by a quadratic form; None if it does not divide."""
        if isinstance(q, QuadForm):
            q = BinForm.from_quad(q)
        n, m = self.degree, q.degree
        if n < m:
            return None if not self.is_zero() else BinForm.zero(0)
        lead = q.coeffs[-1]
        if lead == 0:
            raise ZeroDivisionError("divisor has zero leading coefficient")
        rem = list(self.coeffs)
        quo = [0] * (n - m + 1)
        for k in range(n - m, -1, -1):
            c, r = divmod(rem[k + m], lead)
            if r:
                return None
            quo[k] = c
            if c:
                for j, b in enumerate(q.coeffs):
                    rem[k + j] -= c * b
        if any(rem):
            return None
        return BinForm(quo)

    def __str__(self):
        n = self.degree
        terms = []
        for i in range(n, -1, -1):
            t = self.coeffs[i]
            if not t:
                continue
            mono = "".join(
                v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", n - i)) if e
            )
            if not mono:
                terms.append(str(t))
            elif t == 1:
                terms.append(mono)
            elif t == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{t}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def parse_binform(text: str) -> BinForm:
    """Parse ``t0,t1,...,tn``."""
    return BinForm(tuple(int(s) for s in text.split(",")))


# -- resultant ------------------------------------------------------------------

def sylvester_matrix(q: QuadForm, delta: BinForm) -> list:
    n = delta.degree
    size = n + 2
    rows = []
    for k in range(n):
        row = [0] * size
        row[k:k + 3] = [q.a, q.b, q.c]
        rows.append(row)
    top = list(reversed(delta.coeffs))
    for k in range(2):
        row = [0] * size
        row[k:k + n + 1] = top
        rows.append(row)
    return rows


def resultant(q: QuadForm, delta: BinForm) -> int:
    if delta.degree == 0:
        return delta.coeffs[0] ** 2
    return bareiss_det(sylvester_matrix(q, delta))


@dataclass(frozen=True)
class PairQD:
    q: QuadForm
    delta: BinForm

    @property
    def n(self) -> int:
        return self.delta.degree

    @property
    def disc(self) -> int:
        return self.q.disc

    def resultant(self) -> int:
        return resultant(self.q, self.delta)

    def is_unit(self) -> bool:
        return self.resultant() in (1, -1)


# -- residues modulo q ---------------------------------------------------------

def _eval_data(q: QuadForm):
    from .qorders import ideal_from_form

    return ideal_from_form(q if q.a > 0 else -q)


def lattice_q(q: QuadForm, n: int) -> list:
    """HNF basis of ``{r*q : deg r = n-2}`` in coefficients, high degree first."""
    rows = []
    for i in range(n - 1):
        v = [0] * (n + 1)
        v[i], v[i + 1], v[i + 2] = q.c, q.b, q.a
        rows.append(v[::-1])
    h, _ = hnf(rows)
    return [r for r in h if any(r)]


def residue_mod_q(delta: BinForm, q: QuadForm):
    """``(residue, canonical delta, uni)`` with ``delta == canonical + uni*q``.

    ``residue`` is the pair of ``(1, w)``-coordinates of ``delta(alpha, beta)``
    for the generator pair of ``+-q`` with positive leading coefficient.
    """
    n = delta.degree
    if n < 2:
        raise DegreeError("residues need degree >= 2")
    if gcd(gcd(q.a, q.b), q.c) != 1:
        raise ValueError("q is not primitive")
    from .qorders import evaluate_binform

    g = evaluate_binform(delta, _eval_data(q))
    vec = list(reversed(delta.coeffs))
    for row in lattice_q(q, n):
        c = next(j for j, e in enumerate(row) if e)
        f = vec[c] // row[c]
        if f:
            vec = [a - f * e for a, e in zip(vec, row)]
    canon = BinForm(tuple(reversed(vec)))
    uni = (delta - canon).divide(q)
    return (g.u, g.v), canon, uni


# -- the group G_n(Z) ----------------------------------------------------------

def _canon_mat(m):
    flat = [m[0][0], m[0][1], m[1][0], m[1][1]]
    first = next(x for x in flat if x)
    return m if first > 0 else mat_neg(m)


@dataclass(frozen=True)
class GroupElem:
    """``U_uni . E_eps . S_chi . Gamma_mat``, applied right to left.

    ``Gamma`` substitutes and divides by ``det``; ``S`` multiplies both
    entries by ``chi``; ``E`` multiplies only ``delta`` by ``eps``; ``U``
    adds ``uni * q``. Stored in normal form: for odd n ``eps`` is folded
    into ``-mat``, for even n ``mat`` has its first nonzero entry positive.
    """

    n: int
    uni: tuple
    chi: int = 1
    eps: int = 1
    mat: tuple = qforms.I2

    def __post_init__(self):
        if self.n < 3:
            raise DegreeError("the group acts for n >= 3")
        uni = tuple(int(a) for a in self.uni)
        if len(uni) != self.n - 1:
            raise DegreeError("unipotent part must have n - 1 entries")
        if self.chi not in (1, -1) or self.eps not in (1, -1):
            raise ValueError("chi and eps must be +-1")
        m = tuple(tuple(int(x) for x in row) for row in self.mat)
        if mat_det(m) not in (1, -1):
            raise ValueError("matrix is not unimodular")
        eps = self.eps
        if self.n % 2:
            if eps == -1:
                m, eps = mat_neg(m), 1
        else:
            m = _canon_mat(m)
        object.__setattr__(self, "uni", uni)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "mat", m)

    @classmethod
    def identity(cls, n: int) -> "GroupElem":
        return cls(n, (0,) * (n - 1))

    @classmethod
    def unipotent(cls, r: BinForm) -> "GroupElem":
        return cls(r.degree + 2, r.coeffs)

    @property
    def uni_form(self) -> BinForm:
        return BinForm(self.uni)

    def act(self, p: PairQD) -> PairQD:
        return act(self, p)

    def __matmul__(self, other: "GroupElem") -> "GroupElem":
        return compose_group(self, other)


def act(g: GroupElem, p: PairQD) -> PairQD:
    if p.n != g.n:
        raise DegreeError("group element and pair have different n")
    det = mat_det(g.mat)
    q = p.q.substitute(g.mat)
    if det == -1:
        q = -q
    delta = p.delta.substitute(g.mat).scale(det * g.chi * g.eps)
    if g.chi == -1:
        q = -q
    if any(g.uni):
        delta = delta + g.uni_form * q
    return PairQD(q, delta)


def compose_group(g1: GroupElem, g2: GroupElem) -> GroupElem:
    """The element acting as ``g1`` after ``g2``."""
    if g1.n != g2.n:
        raise DegreeError("n mismatch")
    moved = g2.uni_form.substitute(g1.mat).scale(g1.eps) if any(g2.uni) else None
    uni = g1.uni_form + moved if moved is not None else g1.uni_form
    return GroupElem(g1.n, uni.coeffs, g1.chi * g2.chi, g1.eps * g2.eps,
                     mat_mul(g2.mat, g1.mat))


def inverse(g: GroupElem) -> GroupElem:
    inv = mat_inv(g.mat)
    uni = g.uni_form.substitute(inv).scale(-g.eps)
    return GroupElem(g.n, uni.coeffs, g.chi, g.eps, inv)


def group_generators(n: int) -> list:
    """A generating set of the group for degree n."""
    gens = [
        GroupElem(n, (0,) * (n - 1), mat=((1, 1), (0, 1))),
        GroupElem(n, (0,) * (n - 1), mat=((0, -1), (1, 0))),
        GroupElem(n, (0,) * (n - 1), mat=qforms.REFLECT),
        GroupElem(n, (0,) * (n - 1), chi=-1),
        GroupElem(n, (0,) * (n - 1), eps=-1),
    ]
    for i in range(n - 1):
        u = [0] * (n - 1)
        u[i] = 1
        gens.append(GroupElem(n, u))
    return gens
