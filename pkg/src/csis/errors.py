"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CSISError(Exception):
    exit_code = 1


class ConfigurationError(CSISError, ValueError):
    """Invalid parameters: block size, partition sizes, key constraints."""

    exit_code = 1


class CapacityError(CSISError):
    exit_code = 3

    def __init__(self, available, required):
        self.available = available
        self.required = required
        super().__init__(
            f"payload needs {required} bits but only {available} bits are "
            "available; try a shorter secret"
        )


class FramingError(CSISError):
    """Decrypted length header is inconsistent (wrong key or corrupted data)."""

    exit_code = 4


class FormatError(CSISError, ValueError):
    """Malformed PNM, container, or key file."""

    exit_code = 5

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class NumericError(CSISError, ArithmeticError):
    exit_code = 6

    def __init__(self, message, iteration=None, block=None):
        self.iteration = iteration
        self.block = block
        if block is not None:
            message = f"block {block}: {message}"
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)


class ContractError(CSISError, ValueError):
    """A precondition of a low-level primitive was violated."""

    exit_code = 1
