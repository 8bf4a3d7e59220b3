class IlsError(Exception):
    """Base class for all errors raised by this package."""


class RankDeficient(IlsError):
    pass


class DegenerateRotation(IlsError):
    pass


class NotPositiveDefinite(IlsError):
    pass


class NotSymmetric(IlsError):
    pass


class SingularTriangular(IlsError):
    pass


class NonTermination(IlsError):
    pass


class NonUnimodular(IlsError):
    pass


class InvalidCase(IlsError):
    pass
