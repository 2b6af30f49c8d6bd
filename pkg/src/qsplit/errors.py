"""Exception hierarchy shared by every qsplit module."""


class QsplitError(ValueError):
    """Base class for all errors raised by the toolkit."""

    code = "qsplit"


class NonSquare(QsplitError):
    code = "non-square"


class NotHermitian(QsplitError):
    code = "not-hermitian"


class NotPSD(QsplitError):
    code = "not-psd"


class DimMismatch(QsplitError):
    code = "dim-mismatch"


class LengthMismatch(QsplitError):
    code = "length-mismatch"


class AngleOutOfRange(QsplitError):
    code = "angle-out-of-range"


class DuplicateState(QsplitError):
    code = "duplicate-state"


class NotNormalized(QsplitError):
    code = "not-normalized"


class IndexOutOfRange(QsplitError):
    code = "index-out-of-range"


class Infeasible(QsplitError):
    code = "infeasible"


class RankDeficient(QsplitError):
    code = "rank-deficient"


class GramMismatch(QsplitError):
    code = "gram-mismatch"


class ZeroSuperposition(QsplitError):
    code = "zero-superposition"


class ConvergenceError(QsplitError):
    code = "no-convergence"
