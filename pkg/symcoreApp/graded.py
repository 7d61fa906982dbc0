"""Graded, possibly noncommutative algebra of field and operator atoms.

Field and parameter atoms supercommute with everything; operator atoms
(matrix-valued differential operators under a trace) keep their order
unless the expression is flagged commutative. Spacetime and inner
derivatives are recorded on the atom they act on and commute with each
other.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import sympy

from symcoreApp.errors import ParityError, StructuralError
from symcoreApp.indices import Index, Space, Variance, canonical_dummy_name, fresh_name
from symcoreApp.scalars import clean

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    FIELD = "field"
    PARAMETER = "parameter"
    OPERATOR = "operator"


@dataclass(frozen=True)
class Species:
    name: str
    kind: Kind
    odd: bool = False
    ghost: int = 0
    antisymmetric: bool = False
    latex: str = ""


SPECIES: dict[str, Species] = {}


def register_species(species: Species) -> Species:
    SPECIES[species.name] = species
    return species


for _species in (
    Species("A", Kind.FIELD, latex="A"),
    Species("omega", Kind.FIELD, odd=True, ghost=1, latex=r"\omega"),
    Species("omegabar", Kind.FIELD, odd=True, ghost=-1, latex=r"\omega^{*}"),
    Species("h", Kind.FIELD, latex="h"),
    Species("psi", Kind.FIELD, latex=r"\psi"),
    Species("gauge_parameter", Kind.FIELD, latex=r"\mathcal{E}"),
    Species("theta", Kind.PARAMETER, odd=True, ghost=-1, latex=r"\theta"),
    Species("B", Kind.OPERATOR, latex=r"\mathcal{B}"),
    Species("C", Kind.OPERATOR, latex=r"\mathcal{C}"),
    Species("M", Kind.OPERATOR, latex=r"\mathcal{M}"),
    Species("N", Kind.OPERATOR, latex=r"\mathcal{N}"),
    Species("E", Kind.OPERATOR, latex=r"\mathcal{E}"),
    Species("Acal", Kind.OPERATOR, latex=r"\mathcal{A}"),
    Species("F", Kind.OPERATOR, antisymmetric=True, latex=r"\mathcal{F}"),
):
    register_species(_species)


def species(name: str) -> Species:
    try:
        return SPECIES[name]
    except KeyError:
        raise StructuralError("unknown atom species", name) from None


def _derivative_key(index: Index):
    return index.space.value, index.name


@dataclass(frozen=True)
class GradedAtom:
    species: str
    indices: tuple[Index, ...] = ()
    derivatives: tuple[Index, ...] = field(default=())

    def __post_init__(self):
        species(self.species)
        ordered = tuple(sorted(self.derivatives, key=_derivative_key))
        if ordered != self.derivatives:
            object.__setattr__(self, "derivatives", ordered)

    @property
    def info(self) -> Species:
        return SPECIES[self.species]

    @property
    def odd(self) -> bool:
        return self.info.odd

    @property
    def ghost(self) -> int:
        return self.info.ghost

    @property
    def all_indices(self) -> tuple[Index, ...]:
        return self.indices + self.derivatives

    def with_all_indices(self, new: tuple[Index, ...]) -> "GradedAtom":
        n = len(self.indices)
        return GradedAtom(self.species, tuple(new[:n]), tuple(new[n:]))

    def differentiated(self, index: Index) -> "GradedAtom":
        return GradedAtom(self.species, self.indices, self.derivatives + (index,))

    def bare(self) -> "GradedAtom":
        return GradedAtom(self.species, self.indices)

    def loose_key(self):
        """Sort key that ignores variance."""
        return (
            self.species,
            tuple(i.name for i in self.indices),
            tuple(_derivative_key(d) for d in self.derivatives),
        )

    def full_key(self):
        return self.loose_key() + (tuple(i.variance.value for i in self.all_indices),)


Sequence = tuple[GradedAtom, ...]


def atom(name: str, *indices: Index, derivatives: Iterable[Index] = ()) -> "GradedExpr":
    return GradedExpr({(GradedAtom(name, tuple(indices), tuple(derivatives)),): 1})


def occurrences(atoms) -> dict[str, list[tuple[int, int, Index]]]:
    seen: dict[str, list[tuple[int, int, Index]]] = {}
    for position, a in enumerate(atoms):
        for slot, index in enumerate(a.all_indices):
            seen.setdefault(index.name, []).append((position, slot, index))
    for name, places in seen.items():
        if len(places) > 2:
            raise StructuralError("index appears more than twice", name)
        if len(places) == 2 and places[0][2].space is not places[1][2].space:
            raise StructuralError("index space mismatch", name)
    return seen


def dummies_of(atoms) -> list[str]:
    return [name for name, places in occurrences(atoms).items() if len(places) == 2]


def free_of(atoms) -> frozenset[Index]:
    return frozenset(places[0][2] for places in occurrences(atoms).values() if len(places) == 1)


def names_of(atoms) -> set[str]:
    return {i.name for a in atoms for i in a.all_indices}


def rename(atoms, mapping: Mapping[str, str], variances: Mapping[str, Variance] | None = None) -> Sequence:
    variances = variances or {}
    out = []
    for a in atoms:
        new = []
        for i in a.all_indices:
            target = i.renamed(mapping.get(i.name, i.name))
            if i.name in variances:
                target = target.with_variance(variances[i.name])
            new.append(target)
        out.append(a.with_all_indices(tuple(new)))
    return tuple(out)


def parity(atoms) -> bool:
    return sum(a.odd for a in atoms) % 2 == 1


def ghost_number(atoms) -> int:
    return sum(a.ghost for a in atoms)


def _avoid_capture(left: Sequence, right: Sequence, extra: set[str] = frozenset()) -> Sequence:
    taken = names_of(left) | names_of(right) | set(extra)
    clash = names_of(left) | set(extra)
    mapping = {}
    places = occurrences(right)
    for name in sorted(dummies_of(right)):
        if name in clash:
            new = fresh_name(taken, places[name][0][2].space)
            taken.add(new)
            mapping[name] = new
    return rename(right, mapping) if mapping else tuple(right)


class GradedExpr:
    """Linear combination of ordered atom sequences with sympy coefficients."""

    __slots__ = ("terms", "commutative", "_canonical")
    __hash__ = None

    def __init__(self, terms=(), commutative: bool = False, canonical: bool = False):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Sequence, sympy.Expr] = {}
        for atoms, coefficient in items:
            atoms = tuple(atoms)
            merged[atoms] = merged.get(atoms, sympy.Integer(0)) + sympy.sympify(coefficient)
        self.terms = merged
        self.commutative = commutative
        self._canonical = canonical

    @classmethod
    def scalar(cls, value, commutative: bool = False) -> "GradedExpr":
        return cls({(): value}, commutative=commutative)

    @classmethod
    def zero(cls, commutative: bool = False) -> "GradedExpr":
        return cls({}, commutative=commutative, canonical=True)

    def as_commutative(self, flag: bool = True) -> "GradedExpr":
        return GradedExpr(self.terms, commutative=flag)

    def __add__(self, other) -> "GradedExpr":
        other = _coerce(other, self.commutative)
        return GradedExpr(
            itertools.chain(self.terms.items(), other.terms.items()),
            commutative=self.commutative and other.commutative,
        )

    def __radd__(self, other) -> "GradedExpr":
        return _coerce(other, self.commutative) + self

    def __neg__(self) -> "GradedExpr":
        return GradedExpr(((a, -c) for a, c in self.terms.items()), commutative=self.commutative)

    def __sub__(self, other) -> "GradedExpr":
        return self + (-_coerce(other, self.commutative))

    def __rsub__(self, other) -> "GradedExpr":
        return _coerce(other, self.commutative) - self

    def __mul__(self, other) -> "GradedExpr":
        if not isinstance(other, GradedExpr):
            factor = sympy.sympify(other)
            return GradedExpr(((a, c * factor) for a, c in self.terms.items()), commutative=self.commutative)
        products = []
        for (left, a), (right, b) in itertools.product(self.terms.items(), other.terms.items()):
            products.append((left + _avoid_capture(left, right), a * b))
        return GradedExpr(products, commutative=self.commutative and other.commutative)

    def __rmul__(self, other) -> "GradedExpr":
        if isinstance(other, GradedExpr):
            return other.__mul__(self)
        return self.__mul__(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (GradedExpr, int, sympy.Basic)):
            return NotImplemented
        return graded_normalize(self - _coerce(other, self.commutative)).is_zero

    @property
    def is_zero(self) -> bool:
        return not graded_normalize(self).terms

    def map_coefficients(self, function) -> "GradedExpr":
        return GradedExpr(((a, function(c)) for a, c in self.terms.items()), commutative=self.commutative)

    def ghost_numbers(self) -> set[int]:
        return {ghost_number(a) for a in self.terms}

    def parities(self) -> set[bool]:
        return {parity(a) for a in self.terms}

    def free_indices(self) -> frozenset[Index]:
        for atoms in graded_normalize(self).terms:
            return free_of(atoms)
        return frozenset()

    def coefficient(self, other: "GradedExpr") -> sympy.Expr:
        """Coefficient of the single monomial ``other`` in the normal form of ``self``."""
        (key, weight), = graded_normalize(other).terms.items()
        return clean(graded_normalize(self).terms.get(key, 0) / weight)

    def __len__(self):
        return len(self.terms)

    def __repr__(self) -> str:
        from symcoreApp.serializers import graded_to_text
        return f"GradedExpr({graded_to_text(self)})"


def _coerce(value, commutative: bool) -> GradedExpr:
    return value if isinstance(value, GradedExpr) else GradedExpr.scalar(value, commutative)


def product(*factors: GradedExpr) -> GradedExpr:
    result = GradedExpr.scalar(1, commutative=all(f.commutative for f in factors))
    for f in factors:
        result = result * f
    return result


# normal ordering


def _permutation_sign(order: list[int], atoms: Sequence) -> int:
    odd_positions = [p for p in order if atoms[p].odd]
    inversions = sum(1 for i, j in itertools.combinations(range(len(odd_positions)), 2)
                     if odd_positions[i] > odd_positions[j])
    return -1 if inversions % 2 else 1


def _arrange(atoms: Sequence, commutative: bool):
    """Puts one relabeled sequence in canonical order; returns (sign, atoms) or None for zero."""
    sign = 1
    fixed = []
    for a in atoms:
        if a.info.antisymmetric and len(a.indices) == 2:
            first, second = a.indices
            if first.name == second.name:
                return None
            if second.name < first.name:
                a = GradedAtom(a.species, (second, first), a.derivatives)
                sign = -sign
        fixed.append(a)
    atoms = tuple(fixed)

    positions = list(range(len(atoms)))
    if commutative:
        order = sorted(positions, key=lambda p: atoms[p].loose_key())
    else:
        movable = [p for p in positions if atoms[p].info.kind is not Kind.OPERATOR]
        operators = [p for p in positions if atoms[p].info.kind is Kind.OPERATOR]
        order = sorted(movable, key=lambda p: atoms[p].loose_key()) + operators
    sign *= _permutation_sign(order, atoms)
    atoms = tuple(atoms[p] for p in order)

    for left, right in zip(atoms, atoms[1:]):
        if left.odd and right.odd and left.info.kind is not Kind.OPERATOR and left.loose_key() == right.loose_key():
            return None

    seen: set[str] = set()
    dummy = set(dummies_of(atoms))
    variances = []
    for a in atoms:
        new = []
        for i in a.all_indices:
            if i.name in dummy:
                i = i.with_variance(Variance.DOWN if i.name in seen else Variance.UP)
                seen.add(i.name)
            new.append(i)
        variances.append(a.with_all_indices(tuple(new)))
    return sign, tuple(variances)


def canonical_sequence(atoms: Sequence, commutative: bool, rotations: bool = False):
    """Minimal representative over dummy relabelings (and cyclic rotations).

    Returns ``(sign, atoms)`` or ``None`` when the term vanishes by symmetry.
    """
    if any(a.info.kind is Kind.PARAMETER and a.derivatives for a in atoms):
        return None
    places = occurrences(atoms)
    free = frozenset(name for name, p in places.items() if len(p) == 1)
    candidates = [atoms]
    if rotations and not commutative and len(atoms) > 1:
        candidates = [atoms[k:] + atoms[:k] for k in range(len(atoms))]
    best_key, best, signs = None, None, set()
    for candidate in candidates:
        order: list[str] = []
        for a in candidate:
            for i in a.all_indices:
                if len(places[i.name]) == 2 and i.name not in order:
                    order.append(i.name)
        by_space = {
            space: [n for n in order if places[n][0][2].space is space] for space in (Space.LORENTZ, Space.INNER)
        }
        for lorentz, inner in itertools.product(
            itertools.permutations(range(len(by_space[Space.LORENTZ]))),
            itertools.permutations(range(len(by_space[Space.INNER]))),
        ):
            mapping = {n: canonical_dummy_name(k, Space.LORENTZ, free) for n, k in zip(by_space[Space.LORENTZ], lorentz)}
            mapping.update({n: canonical_dummy_name(k, Space.INNER, free) for n, k in zip(by_space[Space.INNER], inner)})
            arranged = _arrange(rename(candidate, mapping), commutative)
            if arranged is None:
                return None
            sign, sequence = arranged
            key = tuple(a.full_key() for a in sequence)
            if best_key is None or key < best_key:
                best_key, best, signs = key, sequence, {sign}
            elif key == best_key:
                signs.add(sign)
    if len(signs) > 1:
        return None
    return signs.pop(), best


def graded_normalize(e: GradedExpr) -> GradedExpr:
    """Canonical order with signs, dummies relabeled, zero terms dropped."""
    if e._canonical:
        return e
    collected: dict[Sequence, sympy.Expr] = {}
    for atoms, coefficient in e.terms.items():
        result = canonical_sequence(atoms, e.commutative)
        if result is None:
            continue
        sign, sequence = result
        collected[sequence] = collected.get(sequence, sympy.Integer(0)) + sign * coefficient
    cleaned = {}
    for sequence, coefficient in collected.items():
        coefficient = clean(coefficient)
        if coefficient != 0:
            cleaned[sequence] = coefficient
    ordered = dict(sorted(cleaned.items(), key=lambda item: tuple(a.full_key() for a in item[0])))
    return GradedExpr(ordered, commutative=e.commutative, canonical=True)


# derivatives


def differentiate(e: GradedExpr, index: Index) -> GradedExpr:
    """Leibniz rule; parameters are constant."""
    out = []
    for atoms, coefficient in e.terms.items():
        places = occurrences(atoms)
        if index.name in places and len(places[index.name]) == 2:
            atoms = _avoid_capture((), atoms, {index.name})
        for position, a in enumerate(atoms):
            if a.info.kind is Kind.PARAMETER:
                continue
            out.append((atoms[:position] + (a.differentiated(index),) + atoms[position + 1:], coefficient))
    return GradedExpr(out, commutative=e.commutative)


# substitution


@dataclass(frozen=True)
class Template:
    """Image of an atom; ``slots`` name the placeholder indices in the atom's index order."""

    slots: tuple[Index, ...]
    expr: GradedExpr


def _instantiate(template: Template, target: GradedAtom, taken: set[str]) -> GradedExpr:
    if len(template.slots) != len(target.indices):
        raise StructuralError("template arity mismatch", target.species)
    slot_names = {s.name for s in template.slots}
    mapping = {s.name: t.name for s, t in zip(template.slots, target.indices)}
    variances = {s.name: t.variance for s, t in zip(template.slots, target.indices)}
    dummies = set()
    for atoms in template.expr.terms:
        dummies.update(n for n in dummies_of(atoms) if n not in slot_names)
    spaces = {}
    for atoms in template.expr.terms:
        for name, places in occurrences(atoms).items():
            spaces[name] = places[0][2].space
    for name in sorted(dummies):
        new = fresh_name(taken | set(mapping.values()), spaces[name])
        taken.add(new)
        mapping[name] = new
    image = GradedExpr(
        ((rename(atoms, mapping, variances), c) for atoms, c in template.expr.terms.items()),
        commutative=template.expr.commutative,
    )
    for d in target.derivatives:
        image = differentiate(image, d)
    for atoms in image.terms:
        if parity(atoms) != target.odd:
            raise ParityError(f"binding for {target.species} changes Grassmann parity")
    return image


def substitute(e: GradedExpr, binding: Mapping[str, Template | GradedExpr]) -> GradedExpr:
    """Capture-avoiding replacement of atoms by species; derivatives on a replaced atom act on its image."""
    scalars = {k: sympy.sympify(v) for k, v in binding.items() if isinstance(k, sympy.Symbol)}
    binding = {
        k: (v if isinstance(v, Template) else Template((), v))
        for k, v in binding.items() if isinstance(k, str)
    }
    out = []
    for atoms, coefficient in e.terms.items():
        coefficient = coefficient.xreplace(scalars)
        taken = names_of(atoms)
        factors = []
        for a in atoms:
            if a.species in binding:
                image = _instantiate(binding[a.species], a, taken)
                factors.append(list(image.terms.items()))
                taken |= {n for seq in image.terms for n in names_of(seq)}
            else:
                factors.append([((a,), sympy.Integer(1))])
        for choice in itertools.product(*factors):
            sequence = tuple(x for part, _ in choice for x in part)
            weight = coefficient
            for _, c in choice:
                weight = weight * c
            out.append((sequence, weight))
    result = GradedExpr(out, commutative=e.commutative)
    logger.debug("substituted %s into %d terms", sorted(binding), len(result.terms))
    return graded_normalize(result)
