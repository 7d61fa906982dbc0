"""Normal form of integrated (traced) monomials modulo total derivatives.

Monomials are identified up to dummy relabeling and, for traces of
operator products, cyclic rotation. Every derivative occurrence spawns a
partial-integration relation; the relations are closed over the monomials
they reach and the target is reduced against their row-echelon form.
Monomials listed in ``keep`` are eliminated last, so they survive as the
preferred basis.
"""
import logging
from collections import deque
from typing import Callable, Iterable

import sympy
from sympy.polys.matrices import DomainMatrix

from symcoreApp.graded import GradedAtom, GradedExpr, Kind, Sequence, canonical_sequence
from symcoreApp.indices import Space
from symcoreApp.scalars import clean

logger = logging.getLogger(__name__)

Vanishing = Callable[[GradedAtom], bool]


def divergence_free(species_names: Iterable[str]) -> Vanishing:
    """An inner derivative contracted with the atom's own inner index gives zero."""
    names = frozenset(species_names)

    def vanishes(a: GradedAtom) -> bool:
        if a.species not in names:
            return False
        own = {i.name for i in a.indices if i.space is Space.INNER}
        return any(d.space is Space.INNER and d.name in own for d in a.derivatives)

    return vanishes


class TraceReducer:
    def __init__(
        self,
        cyclic: bool = True,
        commutative: bool = False,
        derivative_space: Space = Space.LORENTZ,
        vanishing: Vanishing | None = None,
        keep: Iterable[GradedExpr] = (),
    ):
        self.cyclic = cyclic
        self.commutative = commutative
        self.derivative_space = derivative_space
        self.vanishing = vanishing
        self.keep: list[Sequence] = []
        for monomial in keep:
            for atoms in monomial.terms:
                found = self.key(atoms)
                if found is not None and found[1] not in self.keep:
                    self.keep.append(found[1])

    def key(self, atoms: Sequence):
        if self.vanishing and any(self.vanishing(a) for a in atoms):
            return None
        return canonical_sequence(tuple(atoms), self.commutative, rotations=self.cyclic)

    def relations(self, atoms: Sequence) -> list[dict[Sequence, int]]:
        out = []
        seen_primitives = set()
        for position, a in enumerate(atoms):
            for slot, d in enumerate(a.derivatives):
                if d.space is not self.derivative_space:
                    continue
                stripped = GradedAtom(a.species, a.indices, a.derivatives[:slot] + a.derivatives[slot + 1:])
                primitive = atoms[:position] + (stripped,) + atoms[position + 1:]
                marker = (primitive, d)
                if marker in seen_primitives:
                    continue
                seen_primitives.add(marker)
                relation: dict[Sequence, int] = {}
                for target, b in enumerate(primitive):
                    if b.info.kind is Kind.PARAMETER:
                        continue
                    moved = primitive[:target] + (b.differentiated(d),) + primitive[target + 1:]
                    found = self.key(moved)
                    if found is None:
                        continue
                    sign, sequence = found
                    relation[sequence] = relation.get(sequence, 0) + sign
                relation = {k: v for k, v in relation.items() if v}
                if relation:
                    out.append(relation)
        return out

    def normal_form(self, e: GradedExpr) -> GradedExpr:
        target: dict[Sequence, sympy.Expr] = {}
        for atoms, coefficient in e.terms.items():
            found = self.key(atoms)
            if found is None:
                continue
            sign, sequence = found
            target[sequence] = target.get(sequence, sympy.Integer(0)) + sign * coefficient

        known: set[Sequence] = set()
        rows: list[dict[Sequence, int]] = []
        pending = deque(sorted(set(target) | set(self.keep), key=_order))
        while pending:
            monomial = pending.popleft()
            if monomial in known:
                continue
            known.add(monomial)
            for relation in self.relations(monomial):
                rows.append(relation)
                pending.extend(k for k in relation if k not in known)

        columns = sorted((m for m in known if m not in self.keep), key=_order)
        columns += [m for m in self.keep if m in known]
        position = {m: i for i, m in enumerate(columns)}
        vector = [sympy.Integer(0)] * len(columns)
        for monomial, coefficient in target.items():
            vector[position[monomial]] += coefficient

        if rows:
            matrix = DomainMatrix.from_Matrix(
                sympy.Matrix([[row.get(m, 0) for m in columns] for row in rows])
            )
            echelon, pivots = matrix.to_field().rref()
            echelon = echelon.to_Matrix()
            for r, p in enumerate(pivots):
                weight = vector[p]
                if weight == 0:
                    continue
                for c in range(len(columns)):
                    if echelon[r, c] != 0:
                        vector[c] -= weight * echelon[r, c]
            logger.debug("reduced over %d monomials with %d relations (rank %d)", len(columns), len(rows), len(pivots))

        result = {}
        for monomial, coefficient in zip(columns, vector):
            coefficient = clean(coefficient)
            if coefficient != 0:
                result[monomial] = coefficient
        return GradedExpr(result, commutative=self.commutative)

    def equivalent(self, a: GradedExpr, b: GradedExpr) -> bool:
        return self.normal_form(a - b).terms == {}


def _order(sequence: Sequence):
    return tuple(a.full_key() for a in sequence)
