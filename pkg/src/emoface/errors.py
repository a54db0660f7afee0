"""Shared exception types."""


class EmofaceError(Exception):
    """Base class for errors raised by this package."""


class DialogueParseError(EmofaceError, ValueError):
    """A dialogue corpus line could not be parsed; message names the line."""


class UnknownLabelError(EmofaceError, ValueError):
    """An emotion or expression string is not one of the known labels."""


class FaceJoinError(EmofaceError, ValueError):
    """A face index row has no matching Action Unit annotation row."""


class FaceDataError(EmofaceError, ValueError):
    """A face annotation carries unusable values (e.g. NaN intensities)."""


class CheckpointError(EmofaceError, ValueError):
    """A checkpoint is missing, corrupt, or inconsistent with its manifest."""


class SessionNotFoundError(EmofaceError, KeyError):
    """A chat request referenced a session id that does not exist."""


class FaceNotFoundError(EmofaceError, KeyError):
    """A session request referenced a base face id that does not exist."""


class NumericalError(EmofaceError, RuntimeError):
    """Training produced a non-finite loss; message carries diagnostics."""
