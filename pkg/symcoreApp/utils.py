from functools import wraps

from django.http import HttpRequest
from ninja.errors import HttpError

from symcoreApp.errors import QidError


def qid_errors(view_func):
    """Engine failures become HTTP 400 with the engine's message."""
    @wraps(view_func)
    def wrapper(request: HttpRequest, *args, **kwargs):
        try:
            return view_func(request, *args, **kwargs)
        except QidError as exc:
            raise HttpError(400, str(exc)) from exc
    return wrapper
