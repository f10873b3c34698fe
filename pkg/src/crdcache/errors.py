"""Exception hierarchy.

Every error raised for bad input derives from :class:`CrdError`, which is a
``ValueError`` so callers that only care about "bad arguments" can catch that.
"""


class CrdError(ValueError):
    pass


# design validation
class NonUniformBlockSizeError(CrdError):
    pass


class EmptyBlockError(CrdError):
    pass


class PointOutOfRangeError(CrdError):
    pass


class DuplicatePointInBlockError(CrdError):
    pass


# resolution validation
class NotAPartitionError(CrdError):
    pass


class ClassNotDisjointError(CrdError):
    pass


class ClassDoesNotCoverError(CrdError):
    pass


class IndexOutOfRangeError(CrdError):
    pass


# construction
class InvalidParamsError(CrdError):
    pass


class OutOfRangeError(CrdError):
    pass


# caching scheme
class AccessDegreeUnsupportedError(CrdError):
    def __init__(self, z, available):
        self.z = z
        self.available = sorted(available)
        super().__init__(
            f"cross intersection number mu_{z} does not exist; "
            f"supported access degrees: {self.available or 'none'}"
        )


class ZOutOfRangeError(CrdError):
    pass


class DemandCountMismatchError(CrdError):
    pass


class FileIndexOutOfRangeError(CrdError):
    pass


# baseline formulas
class InvalidMemoryPointError(CrdError):
    pass


class NonIntegerResultError(CrdError):
    pass
