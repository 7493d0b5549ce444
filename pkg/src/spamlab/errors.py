"""Exception hierarchy.

Errors split into two families. ``DataError`` covers anything wrong with
the inputs a user hands us (files, corpora, model files); the CLI maps it
to exit code 2. Contract violations by callers (bad hyperparameters,
mismatched dimensions) subclass ``ValueError`` as well so they read
naturally in library use.
"""


class SpamlabError(Exception):
    """Base class for every error raised by this package."""


class DataError(SpamlabError):
    """Problem with user-supplied data."""


class ConfigError(SpamlabError, ValueError):
    """Invalid configuration or hyperparameter."""


# -- corpus ---------------------------------------------------------------

class MalformedMessage(DataError):
    pass


class UnsupportedContent(DataError):
    pass


class EmptyMailbox(DataError):
    pass


class CsvFormatError(DataError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class BadHeader(CsvFormatError):
    pass


class BadLabel(CsvFormatError):
    pass


class UnbalancedQuote(CsvFormatError):
    pass


class BadRow(CsvFormatError):
    pass


class EmptyData(DataError):
    pass


class DegenerateSplit(DataError):
    pass


class ManifestMismatch(DataError):
    pass


# -- features / models ----------------------------------------------------

class EmptyVocabulary(DataError):
    pass


class MissingClass(DataError):
    pass


class NonPositiveAlpha(ConfigError):
    pass


class IndexOutOfVocabulary(SpamlabError, IndexError):
    pass


class PartitionMismatch(SpamlabError, ValueError):
    pass


class BadDimensions(ConfigError):
    pass


class DimensionMismatch(SpamlabError, ValueError):
    pass


# -- evaluation -----------------------------------------------------------

class LengthMismatch(SpamlabError, ValueError):
    pass


class EmptyEvaluation(DataError):
    pass


class EmptyMatrix(SpamlabError, ValueError):
    pass


class DuplicateName(SpamlabError, ValueError):
    pass


# -- model files ----------------------------------------------------------

class VersionMismatch(DataError):
    def __init__(self, found, supported):
        self.found = found
        self.supported = supported
        super().__init__(
            f"model file format_version {found} is not supported "
            f"(this build reads version {supported})"
        )


class CorruptPayload(DataError):
    pass
