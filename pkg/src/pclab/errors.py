"""Exception hierarchy shared by every pclab module."""


class PclabError(Exception):
    """Base class; the CLI maps subclasses onto exit codes."""


class SizeCapExceeded(PclabError):
    pass


class CapExceeded(PclabError):
    """An enumeration (subgroups, category objects) ran past its count cap."""


class MalformedExpr(PclabError):
    pass


class InvalidAction(MalformedExpr):
    pass


class IncompatibleCodomain(MalformedExpr):
    pass


class InvalidPrimes(MalformedExpr):
    pass


class NotNormal(PclabError):
    pass


class NotAPGroup(PclabError):
    pass


class InvalidHeight(PclabError):
    pass


class OddPrimeRequired(PclabError):
    pass


class HypothesisFailed(PclabError):
    pass


class NotUnipotentOrderP(PclabError):
    pass
