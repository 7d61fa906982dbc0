from typing import Mapping

from symcoreApp import graded, tensor
from symcoreApp.errors import StructuralError
from symcoreApp.graded import GradedExpr, graded_normalize
from symcoreApp.tensor import TensorExpr, canonicalize, contract

__all__ = ["canonicalize", "contract", "graded_normalize", "substitute"]


def substitute(e: TensorExpr | GradedExpr, binding: Mapping) -> TensorExpr | GradedExpr:
    if isinstance(e, TensorExpr):
        return tensor.substitute(e, binding)
    if isinstance(e, GradedExpr):
        return graded.substitute(e, binding)
    raise StructuralError("cannot substitute into", type(e).__name__)
