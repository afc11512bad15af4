"""Exception types shared across the package.

The split matters for the CLI exit codes: input problems (bad state
specs, dimension mismatches, size limits) map to exit 2, a missing
bound crossing in threshold searches maps to exit 3, and internal
numerical assertions map to exit 4.
"""

from __future__ import annotations


class SteeringToolError(Exception):
    """Base class for all package-specific errors."""


class InputError(SteeringToolError, ValueError):
    """Invalid user-supplied data: ranges, shapes, schemas, limits."""


class DimensionMismatchError(InputError):
    """Operator or factor dimensions are inconsistent."""


class NonHermitianError(InputError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class PsdViolationError(InputError):
    """A state is not positive semidefinite; message names the eigenvalue."""


class SizeLimitError(InputError):
    """Requested system size exceeds the dense-computation guard."""


class InvalidSettingError(InputError):
    """A measurement-setting string violates its class constraints."""


class NoCrossingError(SteeringToolError, RuntimeError):
    """A threshold bisection found no sign change on [0, 1]."""


class NumericsError(SteeringToolError, RuntimeError):
    """An internal numerical invariant failed (e.g. imaginary residue)."""
