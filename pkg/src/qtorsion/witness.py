"""Certificates of n-torsion: build a degree-n form with unit resultant
against q, and check one."""

from dataclasses import asdict, dataclass

from . import qforms
from .binforms import BinForm, resultant
from .intlinalg import solve_linear
from .qforms import QuadForm
from .qorders import (
    OrderElem,
    canonical_associate,
    evaluate_binform,
    ideal_from_form,
    ideal_pow,
    principal_generator,
    principal_ideal,
)


class WitnessError(AssertionError):
    """A produced witness failed its own resultant check."""


def _positive(q: QuadForm) -> QuadForm:
    # -q has the same zero locus, so witnesses for -q serve q as well
    return q if q.a > 0 else -q


def monomial_matrix(data, n: int) -> list:
    """2 x (n+1) matrix of ``(1, w)``-coordinates of ``alpha^i beta^(n-i)``."""
    d = data.alpha.d
    alpha, beta = data.alpha, data.beta
    apow = [OrderElem(d, 1, 0)]
    bpow = [OrderElem(d, 1, 0)]
    for _ in range(n):
        apow.append(apow[-1] * alpha)
        bpow.append(bpow[-1] * beta)
    cols = [apow[i] * bpow[n - i] for i in range(n + 1)]
    return [[c.u for c in cols], [c.v for c in cols]]


def construct_witness(q: QuadForm, n: int):
    """A form delta of degree n with ``res(q, delta) = +-1``, or None.

    None means ``I_q^n`` is not principal, so the class of q is not n-torsion.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    data = ideal_from_form(_positive(q))
    g = principal_generator(ideal_pow(data.ideal, n))
    if g is None:
        return None
    g = canonical_associate(g)
    t = solve_linear(monomial_matrix(data, n), [g.u, g.v])
    if t is None:
        raise WitnessError(f"generator {g} is not in the span of the monomials")
    delta = BinForm(t)
    r = resultant(q, delta)
    if r not in (1, -1):
        raise WitnessError(f"witness {delta} for {q} has resultant {r}")
    return delta


@dataclass(frozen=True)
class WitnessReport:
    resultant: int
    unit: bool
    ideal_equal: bool
    torsion: bool

    @property
    def consistent(self) -> bool:
        return self.unit == self.ideal_equal and (not self.unit or self.torsion)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["consistent"] = self.consistent
        return out


def verify_witness(q: QuadForm, delta: BinForm) -> WitnessReport:
    n = delta.degree
    r = resultant(q, delta)
    data = ideal_from_form(_positive(q))
    g = evaluate_binform(delta, data)
    if g.is_zero():
        ideal_eq = False
    else:
        ideal_eq = principal_ideal(g) == ideal_pow(data.ideal, n)
    torsion = qforms.is_n_torsion(q, n) if n > 0 else False
    return WitnessReport(r, r in (1, -1), ideal_eq, torsion)
