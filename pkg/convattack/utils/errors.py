from contextlib import contextmanager


class ConvattackError(Exception):
    """Base class for every error raised on purpose by convattack."""


class DataError(ConvattackError, ValueError):
    """Malformed dataset, embedding file, checkpoint or array shape."""


class ConfigError(ConvattackError, ValueError):
    """A parameter is outside its declared range."""


class OutOfVocabulary(ConvattackError, KeyError):
    """The queried token is not in the embedding table.

    Recoverable: the attack skips the position.
    """

    def __init__(self, token: str):
        super().__init__(token)
        self.token = token

    def __str__(self):
        return f"token {self.token!r} is not in the embedding table"


class TrainingDiverged(ConvattackError, ArithmeticError):
    """The training loss became non-finite."""


@contextmanager
def config_errors(what: str):
    """Reports a wrongly typed or malformed value while building `what` as ConfigError."""
    try:
        yield
    except ConvattackError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid {what}: {e}") from e


def is_whole(value) -> bool:
    """True for ints and integral floats; bools and non-numbers are not whole."""
    if isinstance(value, bool):
        return False
    try:
        return int(value) == value
    except (TypeError, ValueError, OverflowError):
        return False


def whole(value):
    """attrs converter: integral values become int, the rest is left to the validator."""
    return int(value) if is_whole(value) else value
