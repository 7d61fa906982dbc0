"""Deterministic JSON, plain-text and LaTeX renderings of both algebras."""
import json
from typing import Any

import sympy

from symcoreApp.errors import StructuralError
from symcoreApp.graded import SPECIES, GradedAtom, GradedExpr, graded_normalize
from symcoreApp.indices import Index, Space, Variance
from symcoreApp.scalars import latex as coefficient_latex
from symcoreApp.scalars import parse
from symcoreApp.tensor import Metric, Momentum, TensorExpr, canonicalize

GREEK = {
    "mu": r"\mu", "nu": r"\nu", "rho": r"\rho", "sigma": r"\sigma", "lambda": r"\lambda",
    "kappa": r"\kappa", "alpha": r"\alpha", "beta": r"\beta", "gamma": r"\gamma", "tau": r"\tau",
}


def _index_json(i: Index) -> dict:
    return {"name": i.name, "space": i.space.value, "variance": i.variance.value}


def _index_from(data: dict) -> Index:
    return Index(data["name"], Space(data["space"]), Variance(data["variance"]))


def _coefficient_text(c) -> str:
    return sympy.sstr(c, order="lex")


# tensor


def tensor_to_dict(e: TensorExpr) -> dict[str, Any]:
    terms = []
    for atoms, coefficient in canonicalize(e).terms.items():
        encoded = []
        for a in atoms:
            if isinstance(a, Metric):
                encoded.append({
                    "kind": "eta" if a.space is Space.LORENTZ else "delta",
                    "indices": [_index_json(i) for i in a.indices],
                })
            else:
                encoded.append({"kind": "momentum", "vector": a.vector, "index": _index_json(a.index)})
        terms.append({"coefficient": _coefficient_text(coefficient), "atoms": encoded})
    return {"algebra": "tensor", "terms": terms}


def tensor_from_dict(data: dict[str, Any]) -> TensorExpr:
    if data.get("algebra") != "tensor":
        raise StructuralError("not a tensor expression", data.get("algebra"))
    terms = []
    for term in data["terms"]:
        atoms = []
        for a in term["atoms"]:
            if a["kind"] == "momentum":
                atoms.append(Momentum(a["vector"], _index_from(a["index"])))
            else:
                atoms.append(Metric.of(*(_index_from(i) for i in a["indices"])))
        terms.append((tuple(atoms), parse(term["coefficient"])))
    return canonicalize(TensorExpr(terms))


def _index_latex(i: Index) -> str:
    name = GREEK.get(i.name, i.name.lstrip("_"))
    return f"{{}}^{{{name}}}" if i.variance is Variance.UP else f"{{}}_{{{name}}}"


def _momentum_latex(vector: str) -> str:
    head = vector.rstrip("0123456789")
    tail = vector[len(head):]
    return f"{head}_{{{tail}}}" if tail else head


def tensor_to_latex(e: TensorExpr) -> str:
    pieces = []
    for atoms, coefficient in canonicalize(e).terms.items():
        factors = []
        for a in atoms:
            if isinstance(a, Metric):
                symbol = r"\eta" if a.space is Space.LORENTZ else r"\delta"
                factors.append(symbol + "".join(_index_latex(i) for i in a.indices))
            else:
                factors.append(f"{_momentum_latex(a.vector)}{_index_latex(a.index)}")
        pieces.append(_join_latex(coefficient, factors))
    return " + ".join(pieces) if pieces else "0"


def tensor_to_text(e: TensorExpr) -> str:
    pieces = []
    for atoms, coefficient in e.terms.items():
        factors = []
        for a in atoms:
            if isinstance(a, Metric):
                head = "eta" if a.space is Space.LORENTZ else "delta"
                factors.append(f"{head}({','.join(_index_text(i) for i in a.indices)})")
            else:
                factors.append(f"{a.vector}({_index_text(a.index)})")
        pieces.append("*".join([f"({_coefficient_text(coefficient)})"] + factors))
    return " + ".join(pieces) if pieces else "0"


def _index_text(i: Index) -> str:
    return ("^" if i.variance is Variance.UP else "_") + i.name


def _join_latex(coefficient, factors: list[str]) -> str:
    text = coefficient_latex(coefficient)
    if not factors:
        return text
    if coefficient == 1:
        return " ".join(factors)
    return rf"\left({text}\right) " + " ".join(factors)


# graded


def _atom_json(a: GradedAtom) -> dict:
    return {
        "species": a.species,
        "indices": [_index_json(i) for i in a.indices],
        "derivatives": [_index_json(i) for i in a.derivatives],
    }


def graded_to_dict(e: GradedExpr, normalize: bool = True) -> dict[str, Any]:
    source = graded_normalize(e) if normalize else e
    return {
        "algebra": "graded",
        "commutative": e.commutative,
        "terms": [
            {"coefficient": _coefficient_text(c), "atoms": [_atom_json(a) for a in atoms]}
            for atoms, c in source.terms.items()
        ],
    }


def graded_from_dict(data: dict[str, Any]) -> GradedExpr:
    if data.get("algebra") != "graded":
        raise StructuralError("not a graded expression", data.get("algebra"))
    terms = []
    for term in data["terms"]:
        atoms = tuple(
            GradedAtom(
                a["species"],
                tuple(_index_from(i) for i in a["indices"]),
                tuple(_index_from(i) for i in a["derivatives"]),
            )
            for a in term["atoms"]
        )
        terms.append((atoms, parse(term["coefficient"])))
    return graded_normalize(GradedExpr(terms, commutative=data.get("commutative", False)))


def _graded_atom_latex(a: GradedAtom) -> str:
    derivatives = ""
    for d in a.derivatives:
        symbol = r"\partial" if d.space is Space.LORENTZ else r"\nabla"
        derivatives += symbol + _index_latex(d) + " "
    body = SPECIES[a.species].latex or a.species
    return derivatives + body + "".join(_index_latex(i) for i in a.indices)


def graded_to_latex(e: GradedExpr, normalize: bool = True) -> str:
    source = graded_normalize(e) if normalize else e
    pieces = []
    for atoms, coefficient in source.terms.items():
        pieces.append(_join_latex(coefficient, [_graded_atom_latex(a) for a in atoms]))
    return " + ".join(pieces) if pieces else "0"


def graded_to_text(e: GradedExpr) -> str:
    pieces = []
    for atoms, coefficient in e.terms.items():
        factors = []
        for a in atoms:
            derivatives = "".join(("d" if d.space is Space.LORENTZ else "nabla") + _index_text(d) for d in a.derivatives)
            factors.append(f"{derivatives}{a.species}({','.join(_index_text(i) for i in a.indices)})")
        pieces.append("*".join([f"({_coefficient_text(coefficient)})"] + factors))
    return " + ".join(pieces) if pieces else "0"


# dispatch


def to_dict(e) -> dict[str, Any]:
    return tensor_to_dict(e) if isinstance(e, TensorExpr) else graded_to_dict(e)


def from_dict(data: dict[str, Any]):
    return tensor_from_dict(data) if data.get("algebra") == "tensor" else graded_from_dict(data)


def to_latex(e) -> str:
    return tensor_to_latex(e) if isinstance(e, TensorExpr) else graded_to_latex(e)


def dumps(e) -> str:
    return json.dumps(to_dict(e), sort_keys=True, ensure_ascii=False)
