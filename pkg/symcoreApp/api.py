from django.http import HttpRequest
from ninja import Router

from symcoreApp.errors import StructuralError
from symcoreApp.operations import canonicalize, contract, graded_normalize, substitute
from symcoreApp.scalars import SCALARS, parse
from symcoreApp.schemas import ContractIn, ExpressionIn, ExpressionOut, ScalarBindingIn
from symcoreApp.serializers import from_dict, to_dict, to_latex
from symcoreApp.tensor import TensorExpr
from symcoreApp.utils import qid_errors

symcore_router = Router(tags=['Symbolic core'])


def expression_out(e) -> dict:
    out = {"expression": to_dict(e), "latex": to_latex(e), "is_zero": e.is_zero}
    if isinstance(e, TensorExpr):
        out["free_indices"] = [i.name for i in e.free_indices()]
    return out


@symcore_router.post('/canonicalize', response=ExpressionOut)
@qid_errors
def canonicalize_view(request: HttpRequest, data: ExpressionIn):
    e = from_dict(data.expression)
    e = canonicalize(e) if isinstance(e, TensorExpr) else graded_normalize(e)
    return expression_out(e)


@symcore_router.post('/contract', response=ExpressionOut)
@qid_errors
def contract_view(request: HttpRequest, data: ContractIn):
    e = from_dict(data.expression)
    if not isinstance(e, TensorExpr):
        raise StructuralError("contract works on tensor expressions")
    return expression_out(contract(e, data.upper.to_index(), data.lower.to_index()))


@symcore_router.post('/substitute', response=ExpressionOut)
@qid_errors
def substitute_view(request: HttpRequest, data: ScalarBindingIn):
    e = from_dict(data.expression)
    binding = {}
    for name, value in data.scalars.items():
        if name not in SCALARS:
            raise StructuralError("unknown scalar", name)
        binding[SCALARS[name]] = parse(value)
    if data.momenta:
        if not isinstance(e, TensorExpr):
            raise StructuralError("momentum bindings apply to tensor expressions")
        for name, combination in data.momenta.items():
            binding[name] = {vector: parse(weight) for vector, weight in combination.items()}
    return expression_out(substitute(e, binding))
