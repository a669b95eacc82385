"""Exception types shared across the package."""


class KleinpermError(Exception):
    """Base class for all library errors."""


class ReducibleModulus(KleinpermError):
    pass


class ReducibleF(KleinpermError):
    pass


class FNotMonic(KleinpermError):
    pass


class AmbientMismatch(KleinpermError):
    pass


class DimensionMismatch(KleinpermError):
    pass


class FieldMismatch(KleinpermError):
    pass


class RelationViolation(KleinpermError):
    def __init__(self, failed):
        self.failed = tuple(failed)
        super().__init__("module relations violated: " + ", ".join(self.failed))


class NotStable(KleinpermError):
    pass


class NotEquivariant(KleinpermError):
    pass


class NotIndecomposable(KleinpermError):
    pass


class NotEssential(KleinpermError):
    pass


class IdentificationMismatch(KleinpermError):
    pass


class EnumerationBudgetExceeded(KleinpermError):
    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} candidate vectors, budget is {budget}")


class CertificateFailure(KleinpermError):
    """A computed certificate did not verify."""


class LabelSyntaxError(KleinpermError):
    pass


class FormatError(KleinpermError):
    """Malformed module or resolution file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DslError(KleinpermError):
    """Diagram-language error carrying a 1-based line and column."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}")


class DslSyntaxError(DslError):
    pass


class UnknownNode(DslError):
    pass


class DuplicateNode(DslError):
    pass
