class QidError(Exception):
    """Base class for every failure raised by the engine."""


class StructuralError(QidError, ValueError):
    """Malformed index pairing, space mismatch or a label that is not free."""

    def __init__(self, message: str, label: str | None = None):
        self.label = label
        super().__init__(f"{message}: {label}" if label else message)


class ParityError(QidError, ValueError):
    pass


class UnsupportedCaseError(QidError, ValueError):
    pass


class RuleError(QidError, ValueError):
    pass


class GraphError(QidError, ValueError):
    pass


class CovariantFormError(QidError):
    pass


class MatterContentError(QidError, ValueError):
    pass
