"""Exception hierarchy shared by every part of the workbench."""


class WorkbenchError(Exception):
    pass


# coefficient rings
class NonUnitDivision(WorkbenchError, ZeroDivisionError):
    pass


class PrecisionUnderflow(WorkbenchError):
    pass


class InsufficientPrecision(WorkbenchError):
    pass


class NegativeValuation(WorkbenchError, ValueError):
    pass


class ContextMismatch(WorkbenchError, TypeError):
    pass


# linear algebra
class PrecisionLoss(WorkbenchError):
    pass


class PrecisionExhausted(WorkbenchError):
    pass


# groups and algebras
class NotAnAutomorphism(WorkbenchError, ValueError):
    pass


class UnsupportedOrder(WorkbenchError, ValueError):
    pass


class CocycleViolation(WorkbenchError, ValueError):
    pass


class RadicalAlgorithmUnavailable(WorkbenchError):
    pass


class LiftDiverged(WorkbenchError):
    pass


# modules
class SplitFailure(WorkbenchError):
    pass


class IncompleteCatalog(WorkbenchError):
    pass


class NotPrimitive(WorkbenchError):
    pass


class Inconclusive(WorkbenchError):
    pass


# k-theory
class NotAModule(WorkbenchError, ValueError):
    pass


class SquareViolation(WorkbenchError):
    pass


# iwasawa
class NotPGroup(WorkbenchError, ValueError):
    pass


class CertificateMissing(WorkbenchError):
    pass


class PDividesH(WorkbenchError, ValueError):
    pass


class MembershipFailure(WorkbenchError):
    pass


# homotopy
class ExactnessViolation(WorkbenchError):
    pass


class ResolutionDepthExceeded(WorkbenchError):
    pass
