"""Exception types. The CLI maps DataError to exit 1 and ConfigError to exit 2."""


class DataError(Exception):
    """Input data is malformed or inconsistent."""


class ConfigError(ValueError):
    """A parameter is out of range or a required option is missing."""


class OOVError(DataError, KeyError):
    """A word was looked up that the embedding store does not hold."""

    def __init__(self, word):
        self.word = word
        super().__init__(f"out-of-vocabulary word: {word!r}")

    def __str__(self):
        return self.args[0]


class ConsistencyError(DataError):
    """A chain index does not belong to the stream it is applied to."""
