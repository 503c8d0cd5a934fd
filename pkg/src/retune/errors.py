"""Exception types shared across the package."""


class RetuneError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRecordError(RetuneError):
    """A corpus record could not be parsed or violates the document contract."""


class UnknownDocumentError(RetuneError):
    """A doc_id was requested that the index has never seen."""


class EmptyQueryError(RetuneError):
    """The effective query is empty (all words were stop-words)."""


class NoEnabledSectionsError(RetuneError):
    """Every section flag was disabled; nothing to search."""


class NotFoundError(RetuneError):
    """A referenced query, document or evaluation does not exist."""


class EvaluationRejectedError(RetuneError):
    """Evaluation refused: single-word queries carry no ranking signal."""


class NoSharedWordsError(RetuneError):
    """Query and document share no words, so there is nothing to learn."""


class StaleEvaluationError(RetuneError):
    """The claimed result position does not match the logged result list."""


class StoreError(RetuneError):
    """Persistent state is missing, corrupt or unwritable."""


class ReplayError(StoreError):
    """The evaluation log is inconsistent with the vocabulary it should rebuild."""
