import hashlib
import json
from datetime import datetime
from typing import Any

from ninja import Schema


class RunReportOut(Schema):
    """Body of a run report; contains nothing time-dependent."""

    command: str
    argv: list[str] = []
    inputs: dict[str, Any] = {}
    outputs: dict[str, Any] = {}
    verdicts: dict[str, bool] = {}
    exit_status: int = 0

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:16]

    @property
    def passed(self) -> bool:
        return self.exit_status == 0


class RunReportRow(Schema):
    id: int
    command: str
    argv: list[str]
    digest: str
    exit_status: int
    verdicts: dict[str, bool]
    created_at: datetime


class VerifyIn(Schema):
    suites: list[str] = []
    save: bool = False

