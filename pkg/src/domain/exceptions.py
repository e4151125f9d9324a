"""Domain exceptions."""

from typing import Optional


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver stops before reaching its tolerance."""

    def __init__(self, message: str, last_iterate: float, iterations: int):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class TrainingDivergedError(RuntimeError):
    """Raised when the training loss becomes non-finite."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"Training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class FormatVersionError(ValueError):
    """Raised when a persisted file has an unexpected header or version."""

    def __init__(self, found: str, expected: str):
        super().__init__(f"Unsupported format version: found {found!r}, expected {expected!r}")
        self.found = found
        self.expected = expected


class ConfigKeyError(ValueError):
    """Raised for unknown configuration keys."""

    def __init__(self, key: str, suggestion: Optional[str] = None):
        message = f"Unknown configuration key: {key}"
        if suggestion:
            message += f" (did you mean '{suggestion}'?)"
        super().__init__(message)
        self.key = key
        self.suggestion = suggestion


class UsageError(Exception):
    """Raised for invalid command-line usage."""
