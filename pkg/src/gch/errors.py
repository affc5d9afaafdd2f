class GchError(Exception):
    exit_code = 1


class InputError(GchError, ValueError):
    """Malformed or out-of-range input."""
    exit_code = 2


class VerificationError(GchError):
    exit_code = 3


class CertificationError(GchError):
    """Two modular ranks disagreed; retry with other primes."""
    exit_code = 3


class CapacityError(GchError):
    """The requested object exceeds a configured size bound."""
    exit_code = 4
