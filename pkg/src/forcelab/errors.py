"""Exception hierarchy shared by every forcelab module."""


class ForcelabError(Exception):
    """Base class for all errors raised by forcelab."""


class EmptyPoset(ForcelabError):
    pass


class UnknownElement(ForcelabError):
    pass


class NotGreatest(ForcelabError):
    pass


class NotAnEmbedding(ForcelabError):
    pass


class WrongEmbeddingKind(ForcelabError):
    pass


class NotGeneric(ForcelabError):
    pass


class MixedAlgebras(ForcelabError):
    pass


class DiagramMismatch(ForcelabError):
    pass


class PoolTooLarge(ForcelabError):
    pass


class UnboundVariable(ForcelabError):
    pass


class NotUltrafilter(ForcelabError):
    pass


class UncertifiedName(ForcelabError):
    pass


class NotAPreorderUnderGeneric(ForcelabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RankCapExceeded(ForcelabError):
    pass


class StageCapExceeded(ForcelabError):
    pass


class UnknownReference(ForcelabError):
    pass


class DuplicateIdentifier(ForcelabError):
    pass


class ParseError(ForcelabError):
    def __init__(self, message, line=None, column=None, source=None):
        where = ""
        if line is not None:
            where = f"{source or '<input>'}:{line}:{column}: "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.source = source
