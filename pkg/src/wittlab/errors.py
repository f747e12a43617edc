"""Exception hierarchy shared by every wittlab module."""


class WittlabError(Exception):
    pass


class UnknownSymbol(WittlabError):
    pass


class DivisionByZero(WittlabError, ZeroDivisionError):
    pass


class RelationViolation(WittlabError):
    pass


class ZeroElement(WittlabError, ValueError):
    pass


class ZeroScalar(ZeroElement):
    pass


class ZeroSlot(ZeroElement):
    pass


class UnsupportedTower(WittlabError):
    pass


class NotLaurentLayer(WittlabError):
    pass


class NonMonomialEntry(WittlabError):
    pass


class FieldMismatch(WittlabError):
    pass


class ConicMismatch(WittlabError):
    pass


class EvenRamification(WittlabError, ValueError):
    pass


class ParseError(WittlabError, SyntaxError):
    """Syntax error carrying the offending character offset."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.msg = message
        self.text = text
        self.pos = pos
