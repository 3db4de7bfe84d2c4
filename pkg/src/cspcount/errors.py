"""Exception taxonomy shared by the library and the CLI exit codes."""


class CspcountError(Exception):
    """Base class for all library errors."""


class InputError(CspcountError):
    """Malformed file, scalar text, schema violation or bad argument."""


class PreconditionError(CspcountError):
    """An operation was called outside its documented precondition."""


class VerificationError(CspcountError):
    """An exact check (realization, reduction, certificate) failed."""


class CapExceededError(CspcountError):
    """An enumeration would exceed the configured brute-force cap."""
