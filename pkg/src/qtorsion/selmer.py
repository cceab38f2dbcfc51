"""The finite abelian group A built from units and class-group n-torsion,
and the count of its orbits under negation."""

from dataclasses import dataclass, field
from math import gcd, prod

from . import qforms
from .intlinalg import hnf, snf
from .qorders import (
    OrderElem,
    ideal_from_form,
    ideal_pow,
    nth_power_classify,
    principal_generator,
    unit_group,
)


@dataclass(frozen=True)
class AbelianGroup:
    invariants: tuple  # d1 | d2 | ..., each > 1
    generators: tuple = ()

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def two_torsion(self) -> int:
        return prod(gcd(k, 2) for k in self.invariants)

    def elements(self):
        """All elements as coordinate tuples."""
        out = [()]
        for k in self.invariants:
            out = [e + (i,) for e in out for i in range(k)]
        return out


def group_from_relations(ngens: int, relations, generators=()) -> AbelianGroup:
    """``Z^ngens`` modulo the row span of ``relations``."""
    if ngens == 0:
        return AbelianGroup(())
    rows = [list(r) for r in relations] or [[0] * ngens]
    d, _, v = snf(rows)
    diag = [d[i][i] if i < len(d) else 0 for i in range(ngens)]
    if any(x == 0 for x in diag):
        raise ValueError("relations do not present a finite group")
    gens = ()
    if generators:
        # new generator i corresponds to row i of v^-1 in the old ones
        _, vinv = hnf(v)
        gens = tuple(
            tuple(vinv[i][j] for j in range(ngens))
            for i in range(ngens) if diag[i] > 1
        )
    return AbelianGroup(tuple(x for x in diag if x > 1), gens)


@dataclass
class CokerDescription:
    d: int
    n: int
    unit_generators: list       # OrderElem generators of U
    unit_relations: list        # rows over the unit generators
    class_generators: list      # QuadForm generators of cl[n], one per cyclic factor
    class_orders: list
    lifts: list                 # OrderElem h^(n/g) with (h) = J^g
    presentation: list          # relation matrix over unit gens + lifts
    group: AbelianGroup
    fundamental: bool
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "disc": self.d,
            "n": self.n,
            "fundamental": self.fundamental,
            "unit_generators": [str(u) for u in self.unit_generators],
            "class_generators": [list(f.as_list()) for f in self.class_generators],
            "class_orders": self.class_orders,
            "lifts": [str(x) for x in self.lifts],
            "presentation": self.presentation,
            "invariants": list(self.group.invariants),
            "order": self.group.order,
            "two_torsion": self.group.two_torsion,
            "predicted_orbits": inversion_orbit_count(self.group),
            "notes": self.notes,
        }


def _unit_part(d: int, n: int):
    """Generators of U and relations for (U/U^n)/<-1>."""
    z, w, eps = unit_group(d)
    if eps is None:
        # U = <z> cyclic of order w, and -1 = z^(w/2)
        return [z], [[gcd(w, n)], [w // 2]]
    # U = <-1> x <eps>
    return [z, eps], [[2, 0], [0, n], [1, 0]]


def _class_part(d: int, n: int):
    """Cyclic decomposition of cl[n]: (generator forms, orders)."""
    cg = qforms.class_group(d)
    tors = cg.torsion(n)
    if len(tors) <= 1:
        return [], []
    pos = {i: k for k, i in enumerate(tors)}
    rels = []
    for i in tors:
        for j in tors:
            r = [0] * len(tors)
            r[pos[i]] += 1
            r[pos[j]] += 1
            r[pos[cg.table[i][j]]] -= 1
            rels.append(r)
    grp = group_from_relations(len(tors), rels, generators=True)
    forms, orders = [], []
    for combo, k in zip(grp.generators, grp.invariants):
        acc = cg.identity
        for idx, e in zip(tors, combo):
            for _ in range(e % cg.element_order(idx)):
                acc = cg.table[acc][idx]
        forms.append(cg.forms[acc])
        orders.append(k)
    return forms, orders


def coker_group(d: int, n: int) -> CokerDescription:
    if n <= 0:
        raise ValueError("n must be positive")
    qforms.check_discriminant(d)
    fundamental = qforms.is_fundamental(d)
    units, urel = _unit_part(d, n)
    forms, orders = _class_part(d, n)
    k = len(units)
    m = k + len(forms)
    rows = [r + [0] * len(forms) for r in urel]
    lifts = []
    notes = []
    for idx, (f, g) in enumerate(zip(forms, orders)):
        data = ideal_from_form(f)
        h = principal_generator(ideal_pow(data.ideal, g))
        if h is None:
            raise AssertionError(f"class of {f} does not have order dividing {g}")
        x = h ** (n // g)
        lifts.append(x)
        row = [0] * m
        row[k + idx] = g
        # x^g = h^n; confirm it is an n-th power up to sign
        if fundamental:
            found = nth_power_classify(x ** g, n, (1, -1))
            if found is None:
                raise AssertionError("lift relation is not an n-th power")
        rows.append(row)
    if not fundamental:
        notes.append("non-fundamental discriminant: order units and Picard group used")
    group = group_from_relations(m, rows)
    return CokerDescription(d, n, units, urel, forms, orders, lifts, rows,
                            group, fundamental, notes)


def inversion_orbit_count(A: AbelianGroup) -> int:
    return (A.order + A.two_torsion) // 2


def predicted_orbit_count(d: int, n: int) -> int:
    return inversion_orbit_count(coker_group(d, n).group)


def selmer_class_coords(d: int, n: int, x: OrderElem):
    """Coordinates of a unit ``x`` in the unit part ``(U/U^n)/<-1>``."""
    from .qorders import unit_log

    a, b = unit_log(x)
    z, w, eps = unit_group(d)
    if eps is None:
        m = gcd(w, n)
        sub = gcd(m, w // 2)
        return ((a % m) % sub,) if sub > 1 else ()
    return (b % n,)
