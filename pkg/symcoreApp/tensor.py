"""Commutative indexed-tensor algebra.

A ``TensorExpr`` maps a sorted tuple of indexed atoms (metrics and momentum
components) to a sympy coefficient. Invariants such as ``k1.k2``, the
formal scalars and the i-epsilon marker live inside the coefficient, so a
canonical expression never carries a dummy index: every pair is
contracted away into a metric trace or a dot symbol.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import sympy

from symcoreApp.errors import StructuralError
from symcoreApp.indices import (
    ETA_DIAGONAL,
    LORENTZ_RANGE,
    Index,
    Space,
    Variance,
    check_pair,
    fresh_name,
)
from symcoreApp.scalars import DIM, IEPS, clean, dot, dot_parts, vector_space

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Metric:
    """eta on Lorentz indices, delta on inner ones; stored with sorted slots."""

    first: Index
    second: Index

    @classmethod
    def of(cls, a: Index, b: Index) -> "Metric":
        if a.space is not b.space:
            raise StructuralError("metric across spaces", a.name)
        a, b = sorted((a, b), key=lambda i: (i.name, i.variance.value))
        return cls(a, b)

    @property
    def space(self) -> Space:
        return self.first.space

    @property
    def indices(self) -> tuple[Index, Index]:
        return self.first, self.second

    def with_indices(self, indices) -> "Metric":
        return Metric.of(*indices)

    def sort_key(self):
        return (0, self.space.value, self.first.name, self.first.variance.value,
                self.second.name, self.second.variance.value)


@dataclass(frozen=True)
class Momentum:
    """Component of a named momentum vector; the name fixes the space."""

    vector: str
    index: Index

    def __post_init__(self):
        if vector_space(self.vector) is not self.index.space:
            raise StructuralError("momentum index in the wrong space", self.index.name)

    @property
    def indices(self) -> tuple[Index]:
        return (self.index,)

    def with_indices(self, indices) -> "Momentum":
        return Momentum(self.vector, indices[0])

    def sort_key(self):
        return (1, self.index.space.value, self.vector, self.index.name, self.index.variance.value)


Atom = Union[Metric, Momentum]
Term = tuple[Atom, ...]


def _atom_key(atom: Atom):
    return atom.sort_key()


def _sorted(atoms: Iterable[Atom]) -> Term:
    return tuple(sorted(atoms, key=_atom_key))


def _occurrences(atoms) -> dict[str, list[tuple[int, int, Index]]]:
    seen: dict[str, list[tuple[int, int, Index]]] = {}
    for position, atom in enumerate(atoms):
        for slot, index in enumerate(atom.indices):
            seen.setdefault(index.name, []).append((position, slot, index))
    for name, places in seen.items():
        if len(places) > 2:
            raise StructuralError("index appears more than twice", name)
        if len(places) == 2:
            check_pair(places[0][2], places[1][2])
    return seen


def free_indices_of(atoms) -> frozenset[Index]:
    return frozenset(p[0][2] for p in _occurrences(atoms).values() if len(p) == 1)


def _names(atoms) -> set[str]:
    return {index.name for atom in atoms for index in atom.indices}


def _rename(atoms, mapping: Mapping[str, str]) -> Term:
    return tuple(
        atom.with_indices(tuple(i.renamed(mapping.get(i.name, i.name)) for i in atom.indices))
        for atom in atoms
    )


class TensorExpr:
    """Exact linear combination of products of commuting tensor atoms."""

    __slots__ = ("terms", "_canonical")
    __hash__ = None

    def __init__(self, terms: Mapping[Term, object] | Iterable[tuple[Term, object]] = (), canonical=False):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Term, sympy.Expr] = {}
        for atoms, coefficient in items:
            key = _sorted(atoms)
            merged[key] = merged.get(key, sympy.Integer(0)) + sympy.sympify(coefficient)
        self.terms = merged
        self._canonical = canonical

    # constructors

    @classmethod
    def scalar(cls, value) -> "TensorExpr":
        return cls({(): value})

    @classmethod
    def metric(cls, a: Index, b: Index) -> "TensorExpr":
        return cls({(Metric.of(a, b),): 1})

    @classmethod
    def momentum(cls, vector: str, index: Index) -> "TensorExpr":
        return cls({(Momentum(vector, index),): 1})

    @classmethod
    def zero(cls) -> "TensorExpr":
        return cls({}, canonical=True)

    # arithmetic

    def __add__(self, other) -> "TensorExpr":
        other = _coerce(other)
        return TensorExpr(itertools.chain(self.terms.items(), other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "TensorExpr":
        return TensorExpr((atoms, -c) for atoms, c in self.terms.items())

    def __sub__(self, other) -> "TensorExpr":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "TensorExpr":
        return _coerce(other) - self

    def __mul__(self, other) -> "TensorExpr":
        if not isinstance(other, TensorExpr):
            factor = sympy.sympify(other)
            return TensorExpr(((atoms, c * factor) for atoms, c in self.terms.items()))
        products = []
        for (left, a), (right, b) in itertools.product(self.terms.items(), other.terms.items()):
            products.append((left + _avoid_capture(left, right), a * b))
        return TensorExpr(products)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TensorExpr":
        return self * (1 / sympy.sympify(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (TensorExpr, int, Fraction, sympy.Basic)):
            return NotImplemented
        try:
            return (self - _coerce(other)).canonical().is_zero
        except StructuralError:
            return False

    # inspection

    @property
    def is_zero(self) -> bool:
        return not canonicalize(self).terms

    def canonical(self) -> "TensorExpr":
        return canonicalize(self)

    def free_indices(self) -> tuple[Index, ...]:
        canonical = canonicalize(self)
        for atoms in canonical.terms:
            return tuple(sorted(free_indices_of(atoms)))
        return ()

    def coefficient(self, *atoms: Atom) -> sympy.Expr:
        """Coefficient of a canonical atom product (metrics and momenta only)."""
        return canonicalize(self).terms.get(_sorted(atoms), sympy.Integer(0))

    def scalar_value(self) -> sympy.Expr:
        canonical = canonicalize(self)
        for atoms in canonical.terms:
            if atoms:
                raise StructuralError("expression is not a scalar", str(atoms[0]))
        return canonical.terms.get((), sympy.Integer(0))

    def map_coefficients(self, function) -> "TensorExpr":
        return TensorExpr((atoms, function(c)) for atoms, c in self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        from symcoreApp.serializers import tensor_to_text
        return f"TensorExpr({tensor_to_text(self)})"


def _coerce(value) -> TensorExpr:
    return value if isinstance(value, TensorExpr) else TensorExpr.scalar(value)


def _avoid_capture(left: Term, right: Term) -> Term:
    """Renames dummies of ``right`` that collide with any label of ``left``."""
    occurrences = _occurrences(right)
    dummies = [name for name, places in occurrences.items() if len(places) == 2]
    taken = _names(left) | _names(right)
    mapping = {}
    for name in sorted(dummies):
        if name in _names(left):
            new = fresh_name(taken, occurrences[name][0][2].space)
            taken.add(new)
            mapping[name] = new
    return _rename(right, mapping) if mapping else tuple(right)


def _contract_term(atoms: Term, coefficient) -> tuple[Term, sympy.Expr]:
    atoms = list(atoms)
    while True:
        occurrences = _occurrences(atoms)
        pair = next((name for name in sorted(occurrences) if len(occurrences[name]) == 2), None)
        if pair is None:
            return _sorted(atoms), coefficient
        first, second = occurrences[pair]
        if first[0] == second[0]:
            coefficient = coefficient * (LORENTZ_RANGE if first[2].space is Space.LORENTZ else DIM)
            del atoms[first[0]]
            continue
        if not isinstance(atoms[first[0]], Metric) and isinstance(atoms[second[0]], Metric):
            first, second = second, first
        (pa, sa, _), (pb, sb, _) = first, second
        a, b = atoms[pa], atoms[pb]
        if isinstance(a, Metric):
            other = a.indices[1 - sa]
            slots = list(b.indices)
            slots[sb] = other
            atoms[pb] = b.with_indices(tuple(slots))
            del atoms[pa]
        else:
            coefficient = coefficient * dot(a.vector, b.vector)
            for position in sorted((pa, pb), reverse=True):
                del atoms[position]


def _check_consistent(terms: Mapping[Term, sympy.Expr]) -> None:
    signature = None
    for atoms in terms:
        current = free_indices_of(atoms)
        if signature is None:
            signature = current
        elif current != signature:
            odd = sorted(i.name for i in current.symmetric_difference(signature))
            raise StructuralError("terms carry different free indices", odd[0] if odd else None)


def canonicalize(e: TensorExpr) -> TensorExpr:
    """Unique canonical form: all dummies contracted, atoms sorted, coefficients cancelled."""
    if e._canonical:
        return e
    collected: dict[Term, sympy.Expr] = {}
    for atoms, coefficient in e.terms.items():
        atoms, coefficient = _contract_term(atoms, coefficient)
        collected[atoms] = collected.get(atoms, sympy.Integer(0)) + coefficient
    result = {}
    for atoms, coefficient in collected.items():
        coefficient = clean(coefficient)
        if coefficient != 0:
            result[atoms] = coefficient
    _check_consistent(result)
    ordered = dict(sorted(result.items(), key=lambda item: tuple(_atom_key(a) for a in item[0])))
    logger.debug("canonicalized %d raw terms into %d", len(e.terms), len(ordered))
    return TensorExpr(ordered, canonical=True)


def contract(e: TensorExpr, upper: Index, lower: Index) -> TensorExpr:
    """Pairs two free labels of ``e`` and returns the canonical result."""
    canonical = canonicalize(e)
    free = set(canonical.free_indices())
    for label in (upper, lower):
        if label not in free:
            raise StructuralError("label not free", label.name)
    if upper.space is not lower.space:
        raise StructuralError("index space mismatch", upper.name)
    if upper.variance is not Variance.UP or lower.variance is not Variance.DOWN:
        raise StructuralError("contract needs one upper and one lower label", upper.name)
    renamed = TensorExpr(
        (_rename(atoms, {lower.name: upper.name}), c) for atoms, c in canonical.terms.items()
    )
    return canonicalize(renamed)


LinearCombination = Mapping[str, object]


def substitute(e: TensorExpr, binding: Mapping) -> TensorExpr:
    """Simultaneous substitution.

    Keys that are sympy symbols bind formal scalars. String keys bind a
    momentum to a linear combination of momenta, e.g. ``{"k3": {"k1": -1, "k2": -1}}``;
    both the components and every dot symbol involving the momentum follow.
    """
    scalars = {k: sympy.sympify(v) for k, v in binding.items() if isinstance(k, sympy.Symbol)}
    vectors = {k: dict(v) for k, v in binding.items() if isinstance(k, str)}
    for name, combination in vectors.items():
        for target in combination:
            if vector_space(target) is not vector_space(name):
                raise StructuralError("momentum bound across spaces", name)

    def image(name: str) -> dict[str, sympy.Expr]:
        if name in vectors:
            return {t: sympy.sympify(c) for t, c in vectors[name].items()}
        return {name: sympy.Integer(1)}

    out = []
    for atoms, coefficient in e.terms.items():
        replacements = dict(scalars)
        for symbol in coefficient.free_symbols:
            parts = dot_parts(symbol)
            if parts and (parts[0] in vectors or parts[1] in vectors):
                left, right = image(parts[0]), image(parts[1])
                replacements[symbol] = sum(
                    (cl * cr * dot(l, r) for (l, cl), (r, cr) in itertools.product(left.items(), right.items())),
                    sympy.Integer(0),
                )
        coefficient = coefficient.xreplace(replacements)
        factors = []
        for atom in atoms:
            if isinstance(atom, Momentum) and atom.vector in vectors:
                factors.append([((Momentum(t, atom.index),), c) for t, c in image(atom.vector).items()])
            else:
                factors.append([((atom,), sympy.Integer(1))])
        for choice in itertools.product(*factors):
            product_atoms = tuple(a for part, _ in choice for a in part)
            product_coefficient = coefficient
            for _, c in choice:
                product_coefficient = product_coefficient * c
            out.append((product_atoms, product_coefficient))
    return canonicalize(TensorExpr(out))


def scale_vectors(e: TensorExpr, vectors: Iterable[str], factor) -> TensorExpr:
    return substitute(e, {name: {name: factor} for name in vectors})


def vectors_in(e: TensorExpr) -> set[str]:
    names = set()
    for atoms, coefficient in e.terms.items():
        names.update(a.vector for a in atoms if isinstance(a, Momentum))
        for symbol in coefficient.free_symbols:
            parts = dot_parts(symbol)
            if parts:
                names.update(parts)
    return names


# numeric evaluation


def _component(atom: Atom, values: Mapping[str, int], vectors) -> Fraction:
    if isinstance(atom, Metric):
        a, b = atom.indices
        va, vb = values[a.name], values[b.name]
        if va != vb:
            return Fraction(0)
        if atom.space is Space.LORENTZ and a.variance is b.variance:
            return Fraction(ETA_DIAGONAL[va])
        return Fraction(1)
    component = Fraction(vectors[atom.vector][values[atom.index.name]])
    if atom.index.space is Space.LORENTZ and atom.index.variance is Variance.DOWN:
        component *= ETA_DIAGONAL[values[atom.index.name]]
    return component


def numeric_dot(a, b, space: Space) -> Fraction:
    if space is Space.LORENTZ:
        return sum((Fraction(x) * Fraction(y) * s for x, y, s in zip(a, b, ETA_DIAGONAL)), Fraction(0))
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def evaluate(
    e: TensorExpr,
    vectors: Mapping[str, Iterable],
    free: Mapping[str, int] | None = None,
    inner_dim: int = 3,
    scalars: Mapping[sympy.Symbol, object] | None = None,
) -> sympy.Expr:
    """Componentwise value of ``e`` with dummies summed explicitly.

    ``vectors`` holds contravariant components; the i-epsilon marker is set
    to zero and D to ``inner_dim``.
    """
    vectors = {name: tuple(Fraction(x) for x in comps) for name, comps in vectors.items()}
    free = dict(free or {})
    substitutions = {DIM: inner_dim, IEPS: 0}
    substitutions.update(scalars or {})
    total = sympy.Integer(0)
    for atoms, coefficient in e.terms.items():
        replacements = dict(substitutions)
        for symbol in coefficient.free_symbols:
            parts = dot_parts(symbol)
            if parts:
                value = numeric_dot(vectors[parts[0]], vectors[parts[1]], vector_space(parts[0]))
                replacements[symbol] = sympy.Rational(value.numerator, value.denominator)
        weight = coefficient.subs(replacements)
        occurrences = _occurrences(atoms)
        dummies = sorted(name for name, places in occurrences.items() if len(places) == 2)
        ranges = [
            range(LORENTZ_RANGE if occurrences[name][0][2].space is Space.LORENTZ else inner_dim)
            for name in dummies
        ]
        accumulated = Fraction(0)
        for assignment in itertools.product(*ranges):
            values = dict(free)
            values.update(zip(dummies, assignment))
            product = Fraction(1)
            for atom in atoms:
                product *= _component(atom, values, vectors)
                if not product:
                    break
            accumulated += product
        total += weight * sympy.Rational(accumulated.numerator, accumulated.denominator)
    return sympy.simplify(total)
