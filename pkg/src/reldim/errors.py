"""Exception hierarchy.  ``code`` strings are what the CLI prints."""


class ReldimError(Exception):
    code = "error"
    exit_status = 1

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.code)
        self.detail = detail


class InputError(ReldimError):
    """Malformed or inconsistent input; the CLI exits with status 2."""

    code = "input-error"
    exit_status = 2

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None, column: int | None = None):
        loc = ""
        if path is not None:
            loc = path
            if line is not None:
                loc += f":{line}"
                if column is not None:
                    loc += f":{column}"
            loc += ": "
        super().__init__(loc + message)
        self.path, self.line, self.column = path, line, column


class AlgebraMismatch(InputError):
    code = "algebra-mismatch"


class InconsistentRelation(InputError):
    code = "inconsistent relation"


class FieldTooSmall(ReldimError):
    code = "p-too-small"
    exit_status = 2


class NotFiniteDimensional(ReldimError):
    code = "not-finite-dimensional-at-cap"


class RadicalVerificationFailed(ReldimError):
    code = "radical-verification-failed"


class SplittingFailed(ReldimError):
    code = "splitting-failed"


class IsoUncertified(ReldimError):
    code = "iso-uncertified"


class HypothesisFailed(ReldimError):
    code = "hypothesis-failed"

    def __init__(self, message: str, degrees=()):
        super().__init__(message)
        self.degrees = list(degrees)


class NotAGenerator(ReldimError):
    code = "not-a-generator"


class GldimAtCap(ReldimError):
    code = "gldim-at-cap"


class IdAtCap(ReldimError):
    code = "id-at-cap"
