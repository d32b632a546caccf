"""Exception types shared across the package."""


class FlightlineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FlightlineError):
    """A value violates a documented range or invariant."""


class CodecError(FlightlineError):
    """Base class for wire-format encode/decode failures."""


class EncodeError(CodecError):
    pass


class BadMagicError(CodecError):
    pass


class BadVersionError(CodecError):
    pass


class TruncatedFrameError(CodecError):
    pass


class CrcMismatchError(CodecError):
    pass


class GeometryError(FlightlineError):
    """Base class for camera-geometry failures."""


class BehindCameraError(GeometryError):
    """Point is at or behind the camera plane (z <= 0)."""


class DegenerateGeometryError(GeometryError):
    """Input configuration admits no unique solution (collinear, coplanar, singular)."""


class FamilyGenerationError(FlightlineError):
    """Tag family search produced no codeword for the requested parameters."""


class BindingConflictError(FlightlineError):
    """Attempt to rebind a dev_addr or tag_id without force."""


class CameraNotCalibratedError(FlightlineError):
    """Sighting arrived for a camera with no known extrinsics."""


class ScenarioError(FlightlineError):
    """Scenario or config file failed validation; message carries line numbers."""


class ReplayActiveError(FlightlineError):
    """A replay session is already running."""
