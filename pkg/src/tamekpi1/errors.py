"""Exception hierarchy shared by all modules."""


class Kpi1Error(Exception):
    """Base class for every error raised by this package."""


class NotAdmissible(Kpi1Error):
    pass


class DivisorConflict(Kpi1Error):
    pass


class BadResidue(Kpi1Error):
    pass


class NotSquarefree(Kpi1Error):
    pass


class UnsupportedAssumption(Kpi1Error):
    pass


class NotComputable(Kpi1Error):
    pass


class OutOfScope(Kpi1Error):
    pass


class EqualPrimes(Kpi1Error):
    pass


class MemberOfS(Kpi1Error):
    pass


class ResourceLimit(Kpi1Error):
    pass


class DegreeOverflow(Kpi1Error):
    pass


class InhomogeneousRelation(Kpi1Error):
    pass


class WrongDegree(Kpi1Error):
    pass


class DegenerateRelation(Kpi1Error):
    pass


class IncompleteCupData(Kpi1Error):
    pass


class BudgetExceeded(Kpi1Error):
    pass


class NotFoundWithinBound(Kpi1Error):
    """Raised when a bounded prime search exhausts its domain.

    ``transcript`` carries whatever the search recorded before giving up.
    """

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript


class PreconditionViolation(Kpi1Error):
    pass


class DefectAssumptionUnavailable(Kpi1Error):
    pass


class NotCertifiable(Kpi1Error):
    pass


class MissingCertificate(Kpi1Error):
    pass


class SchemaMismatch(Kpi1Error):
    pass


class ParseError(Kpi1Error):
    pass
