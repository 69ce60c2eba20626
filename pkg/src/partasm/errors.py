"""Exception types shared across the package."""


class PartasmError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(PartasmError, ValueError):
    """Tensor/array shapes are incompatible for the requested operation."""


class DegenerateInputError(PartasmError, ValueError):
    """An input is structurally too small or empty for the operation."""


class DegenerateGeometryError(DegenerateInputError):
    """Point cloud geometry is rank-deficient (collinear or coincident)."""

    def __init__(self, message: str, rank: int):
        super().__init__(f"{message} (covariance rank {rank})")
        self.rank = rank


class NonUnitQuaternionError(PartasmError, ValueError):
    """A quaternion expected to be unit-norm is not, beyond tolerance."""


class DatasetFormatError(PartasmError, ValueError):
    """A shape or manifest file could not be parsed."""


class VersionMismatchError(DatasetFormatError):
    """A stored file declares a format version this build does not read."""


class CheckpointMismatchError(PartasmError, ValueError):
    """Checkpoint contents disagree with the requested configuration."""


class GenerationError(PartasmError, ValueError):
    """Requested synthetic-shape parameters are infeasible."""


class NonFiniteLossError(PartasmError, RuntimeError):
    """Training produced a NaN/inf loss; carries the offending shape id."""

    def __init__(self, message: str, shape_id: str):
        super().__init__(message)
        self.shape_id = shape_id
