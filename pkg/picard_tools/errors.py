class PicardToolsError(Exception):
    pass


class ParseError(PicardToolsError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(PicardToolsError):
    pass


class CompositionNonzero(PicardToolsError):
    pass


class NoIntegerSolution(PicardToolsError):
    pass


class VoidComplex(PreconditionError):
    pass


class NotAFace(PreconditionError):
    pass


class UnknownVertex(PreconditionError):
    pass


class NotAGraph(PreconditionError):
    pass


class InvalidPresentation(PreconditionError):
    pass


class NotSimplicialPresentation(PreconditionError):
    pass


class NotMonomialPresentation(PreconditionError):
    pass


class NotPositive(PreconditionError):
    pass


class NotIntegral(PreconditionError):
    pass


class TorsionError(PreconditionError):
    pass


class NotInSpec(PreconditionError):
    pass


class NotOpen(PreconditionError):
    pass


class DegenerateLocalization(PreconditionError):
    pass


class NotFullDimensional(PreconditionError):
    pass


class NotPointed(PreconditionError):
    pass


class FacetPrimeMismatch(PreconditionError):
    pass


class WrongInputKind(PreconditionError):
    pass
