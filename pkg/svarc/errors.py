"""
Exceptions raised by svarc. Every error carries a message naming the witness.
"""


class SvarcError(ValueError):
    pass


class FormatError(SvarcError):
    """Input file or command-line value could not be parsed."""


class InvalidCategory(SvarcError):
    pass


class MissingIdentity(InvalidCategory):
    pass


class NonAssociative(InvalidCategory):
    def __init__(self, h, g, f, left, right):
        self.witness = (h, g, f)
        super().__init__(
            f"(h.g).f != h.(g.f) for h={h!r}, g={g!r}, f={f!r}: {left!r} vs {right!r}"
        )


class BadCompositionDomain(InvalidCategory):
    pass


class InvalidFunctor(SvarcError):
    pass


class InvalidSubcategory(SvarcError):
    pass


class MalformedHom(SvarcError):
    pass


class NotFunctorial(SvarcError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class PairingNotNatural(SvarcError):
    def __init__(self, identity, witness):
        self.identity = identity
        self.witness = witness
        super().__init__(f"pairing identity ({identity}) fails at {witness!r}")


class DenominatorNotContained(SvarcError):
    pass


class NotInNumerator(SvarcError):
    pass


class NotChainCompatible(SvarcError):
    pass


class ComplexBroken(SvarcError):
    pass


class DegreeOverflow(SvarcError):
    pass


class UnboundedNerve(SvarcError):
    """A category with a cycle of non-identity arrows needs an explicit degree cap."""


class NotGeometricCover(SvarcError):
    pass


class SetExplosion(SvarcError):
    pass


class NotABifibration(SvarcError):
    pass


class UnknownInstance(SvarcError):
    pass
