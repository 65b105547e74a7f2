"""Exception types shared across the toolkit."""


class MirrorxError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedFamily(MirrorxError):
    pass


class AlgebraMismatch(MirrorxError):
    pass


class NonDominantWeight(MirrorxError):
    pass


class BudgetExceeded(MirrorxError):
    pass


class IncompatibleOffsets(MirrorxError):
    """Raised when adding q-series whose leading exponents differ by a non-integer."""


class InvalidPower(MirrorxError):
    pass


class Inconclusive(MirrorxError):
    pass


class NoValidMu(MirrorxError):
    pass


class NotClassifiable(MirrorxError):
    pass


class IllConditioned(MirrorxError):
    pass
