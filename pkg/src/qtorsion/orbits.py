"""Deciding equivalence of unit-resultant pairs and counting orbits by a
bounded search over delta."""

from dataclasses import dataclass, field
from itertools import product

from . import qforms
from .binforms import BinForm, DegreeError, GroupElem, PairQD, act, compose_group
from .binforms import residue_mod_q, _eval_data
from .qforms import NEG_I2, I2, QuadForm, mat_pow
from .qorders import evaluate_binform, ideal_from_form, principal_generator, unit_log
from .selmer import predicted_orbit_count, selmer_class_coords


class NotUnitResultant(ValueError):
    pass


class HeightExhausted(RuntimeError):
    """Sweep budget ran out; ``partial`` holds what was found so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def _plain(n, chi=1, eps=1, mat=I2):
    return GroupElem(n, (0,) * (n - 1), chi, eps, mat)


def _check_pair(p: PairQD):
    if p.n < 3:
        raise DegreeError("orbit questions need n >= 3")
    if not p.is_unit():
        raise NotUnitResultant(f"resultant of {p} is not +-1")


def _finish(n, q2, delta_c, delta2, tail):
    """Unipotent correction turning ``delta_c`` into ``delta2``, composed with ``tail``."""
    r = (delta2 - delta_c).divide(q2)
    if r is None:
        return None
    return compose_group(GroupElem(n, r.coeffs), tail)


def find_equivalence(p1: PairQD, p2: PairQD):
    """A group element g with ``act(g, p1) == p2``, or None."""
    _check_pair(p1)
    _check_pair(p2)
    if p1.n != p2.n:
        raise DegreeError("pairs of different degree")
    if p1.disc != p2.disc:
        return None
    n = p1.n
    found = qforms.equivalent(p1.q, p2.q, allow_det_minus_one=True, allow_negation=True)
    if found is None:
        return None
    gamma, chi = found
    h = _plain(n, chi, 1, gamma)
    p1t = act(h, p1)
    q2 = p2.q
    assert p1t.q == q2
    target, _, _ = residue_mod_q(p2.delta, q2)

    if q2.disc < 0:
        for mat, c in qforms.automorph_generators(q2):
            for e in (1, -1):
                s = compose_group(_plain(n, c, e, mat), h)
                dc = act(s, p1).delta
                if residue_mod_q(dc, q2)[0] == target:
                    g = _finish(n, q2, dc, p2.delta, s)
                    if g is not None:
                        return g
        return None

    gens = qforms.automorph_generators(q2)
    hyp, hyp_chi = gens[1]
    reps = [(I2, 1), (NEG_I2, 1)]
    if len(gens) > 2:
        r, rc = gens[2]
        reps += [(r, rc), (qforms.mat_mul(NEG_I2, r), rc)]
    data = _eval_data(q2)
    g2 = evaluate_binform(p2.delta, data)
    # hyperbolic element multiplies delta(alpha, beta) by a fixed unit eta
    moved = act(_plain(n, hyp_chi, 1, hyp), p2).delta
    eta = g2.exact_div(evaluate_binform(moved, data))
    eta_log = unit_log(eta)[1]
    for mat, c in reps:
        for e in (1, -1):
            s = compose_group(_plain(n, c, e, mat), h)
            dc = act(s, p1).delta
            gc = evaluate_binform(dc, data)
            nu = gc.exact_div(g2, strict=False)
            if nu is None or not nu.is_unit():
                continue
            b = unit_log(nu)[1]
            if eta_log == 0:
                if b:
                    continue
                k = 0
            elif b % eta_log:
                continue
            else:
                k = b // eta_log
            # eta is the factor picked up per application of hyp
            t = compose_group(_plain(n, hyp_chi ** (k % 2), 1, mat_pow(hyp, k)), s)
            dt = act(t, p1).delta
            if residue_mod_q(dt, q2)[0] == target:
                g = _finish(n, q2, dt, p2.delta, t)
                if g is not None:
                    return g
    return None


def pairs_equivalent(p1: PairQD, p2: PairQD) -> bool:
    return find_equivalence(p1, p2) is not None


# -- enumeration ---------------------------------------------------------------

@dataclass
class OrbitReport:
    disc: int
    n: int
    height: int
    representatives: list = field(default_factory=list)
    predicted: int = None
    status: str = "ok"
    swept: int = 0
    unit_pairs: int = 0
    notes: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.representatives)

    @property
    def agreement(self):
        if self.predicted is None:
            return None
        return self.count == self.predicted

    def as_dict(self) -> dict:
        return {
            "disc": self.disc,
            "n": self.n,
            "height": self.height,
            "count": self.count,
            "predicted": self.predicted,
            "agreement": self.agreement,
            "status": self.status,
            "swept": self.swept,
            "unit_pairs": self.unit_pairs,
            "representatives": [
                {"form": list(p.q.as_list()), "delta": list(p.delta.coeffs)}
                for p in self.representatives
            ],
            "notes": self.notes,
        }


MAX_SWEEP = 2_000_000


def _form_reps(d: int) -> list:
    """Class representatives with each class identified with its inverse."""
    cg = qforms.class_group(d)
    return [cg.forms[i] for i in range(cg.order) if i <= cg.inverse(i)]


def enumerate_orbits(d: int, n: int, height: int, max_sweep: int = MAX_SWEEP,
                     short_circuit: bool = False, predict: bool = True) -> OrbitReport:
    """Orbits of unit-resultant pairs of discriminant d among ``|t_i| <= height``."""
    if n < 3:
        raise DegreeError("orbit enumeration needs n >= 3")
    if height < 0:
        raise ValueError("height must be non-negative")
    qforms.check_discriminant(d)
    report = OrbitReport(d, n, height)
    if predict:
        report.predicted = predicted_orbit_count(d, n)
    report.notes.extend(discrepancy_notes(d, n))
    rng = range(-height, height + 1)
    for q in _form_reps(d):
        seen = {}
        reps_here = []
        for t in product(rng, repeat=n + 1):
            if report.swept >= max_sweep:
                report.status = "height-exhausted"
                raise HeightExhausted(f"sweep budget of {max_sweep} forms exhausted", report)
            report.swept += 1
            delta = BinForm(t)
            p = PairQD(q, delta)
            if not p.is_unit():
                continue
            report.unit_pairs += 1
            key = residue_mod_q(delta, q)[0]
            if key in seen:
                continue
            for idx, rep in reps_here:
                if pairs_equivalent(rep, p):
                    seen[key] = idx
                    break
            else:
                seen[key] = len(report.representatives)
                reps_here.append((seen[key], p))
                report.representatives.append(p)
                if short_circuit and report.predicted is not None \
                        and report.count >= report.predicted:
                    return report
    if report.predicted is not None and report.count > report.predicted:
        report.notes.append(
            f"brute force found {report.count} orbits, more than the {report.predicted} predicted"
        )
    return report


# -- the Gaussian-integer example ------------------------------------------------

@dataclass
class QiComparison:
    n: int
    equivalent: bool
    unipotent_only: bool
    witness: GroupElem = None

    def note(self) -> str:
        half = self.n // 2
        if not self.equivalent:
            return (f"x^{self.n} and (xy)^{half} against x^2+y^2 lie in different orbits, "
                    "matching the two-orbit expectation for Q(i)")
        how = "a unipotent element alone" if self.unipotent_only else "a group element"
        return (f"tension with the two-orbit expectation for Q(i) at 4 | {self.n}: x^{self.n} and "
                f"(xy)^{half} against x^2+y^2 are equivalent via {how} (uni={list(self.witness.uni)}, "
                f"chi={self.witness.chi}, eps={self.witness.eps}, mat={self.witness.mat})")


def qi_comparison(n: int) -> QiComparison:
    """Compare ``(x^2+y^2, x^n)`` with ``(x^2+y^2, (xy)^(n/2))`` for even n."""
    if n % 2 or n < 4:
        raise ValueError("needs even n >= 4")
    q = QuadForm(1, 0, 1)
    p1 = PairQD(q, BinForm.monomial(n, n))
    p2 = PairQD(q, BinForm.monomial(n, n // 2))
    r = (p2.delta - p1.delta).divide(q)
    if r is not None:
        return QiComparison(n, True, True, GroupElem(n, r.coeffs))
    g = find_equivalence(p1, p2)
    return QiComparison(n, g is not None, False, g)


def discrepancy_notes(d: int, n: int) -> list:
    if d == -4 and n % 2 == 0 and n >= 4:
        cmp = qi_comparison(n)
        if cmp.equivalent:
            return [cmp.note()]
    return []


# -- experimental per-pair invariant ---------------------------------------------

def selmer_invariant_experimental(p: PairQD) -> dict:
    """Class of ``delta(alpha, beta)`` in the Selmer quotient (advisory only)."""
    _check_pair(p)
    d, n = p.disc, p.n
    q = p.q if p.q.a > 0 else -p.q
    data = ideal_from_form(q)
    g = evaluate_binform(p.delta, data)
    cg = qforms.class_group(d)
    cls = cg.index(q)
    out = {"experimental": True, "element": str(g), "class_index": cls,
           "unit_part": None, "trivial": None}
    if g.is_unit():
        u = g
    elif cls == cg.identity:
        u = (principal_generator(data.ideal) ** n).exact_div(g)
    else:
        out["trivial"] = False
        return out
    coords = selmer_class_coords(d, n, u)
    out["unit_part"] = list(coords)
    out["trivial"] = cls == cg.identity and not any(coords)
    return out
