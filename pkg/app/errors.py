"""Error hierarchy shared by every service.

Each error carries a human readable ``detail`` and the ``exit_code`` the CLI
returns when it escapes a command.
"""


class MatroidError(Exception):
    exit_code = 2

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


class SpecParseError(MatroidError):
    pass


class AxiomViolation(MatroidError):
    def __init__(self, axiom: str, circuits: list, detail: str = ""):
        self.axiom = axiom
        self.circuits = circuits
        super().__init__(detail or f"axiom {axiom} violated by {circuits}")


class DuplicateElement(MatroidError):
    pass


class InvalidParams(MatroidError):
    pass


class UnknownVertex(MatroidError):
    pass


class InvalidMatrix(MatroidError):
    pass


class DependentInput(MatroidError):
    pass


class NotDependent(MatroidError):
    pass


class NotACircuit(MatroidError):
    pass


class NotCrossing(MatroidError):
    pass


class QuadrantTooSmall(MatroidError):
    pass


class PreconditionViolated(MatroidError):
    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(detail or f"precondition {condition} violated")


class NotA2Separation(MatroidError):
    def __init__(self, index: int, detail: str = ""):
        self.index = index
        super().__init__(detail or f"family member {index} is not a 2-separation side")


class FamilyNotDisjoint(MatroidError):
    pass


class BadSharedElement(MatroidError):
    pass


class GroundSetMismatch(MatroidError):
    pass


class NotNested(MatroidError):
    pass


class NotSymmetric(MatroidError):
    pass


class NotATree(MatroidError):
    pass


class NotAPartition(MatroidError):
    pass


class Disconnected(MatroidError):
    exit_code = 3


class TooSmall(MatroidError):
    exit_code = 4


class GroundSetTooLarge(MatroidError):
    exit_code = 5


class LemmaFailure(MatroidError):
    exit_code = 1

    def __init__(self, which: str, detail: str = ""):
        self.which = which
        super().__init__(f"{which}: {detail}" if detail else which)


class Unclassifiable(LemmaFailure):
    pass
