"""Exception hierarchy shared by all modules."""


class HKError(ValueError):
    pass


class LatticeError(HKError):
    pass


class ParseError(HKError):
    def __init__(self, msg, line=None):
        self.line = line
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


class NotTwoElementary(LatticeError):
    pass


class OutOfRegime(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class DependentGenerators(LatticeError):
    pass


class DegenerateComplement(LatticeError):
    pass


class NonIntegralGlue(LatticeError):
    pass


class GlueNotPreserved(LatticeError):
    pass


class NotInvolution(LatticeError):
    pass


class NotIsometry(LatticeError):
    pass


class InvalidOrder(LatticeError):
    pass


class VectorNotInLattice(LatticeError):
    pass


class NegativeSquare(LatticeError):
    pass


class TrivialClass(LatticeError):
    pass


class ShapeMismatch(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


class RankTooLarge(LatticeError):
    pass


class RankMismatch(HKError):
    pass


class RankTooSmall(HKError):
    pass


class NonSquare(HKError):
    pass


class OutOfRange(HKError):
    pass


class NotHomogeneousQuadratic(HKError):
    pass


class HasLinearPart(HKError):
    pass


class UnknownClaimId(HKError):
    pass
