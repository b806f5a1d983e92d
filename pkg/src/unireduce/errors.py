"""Exception types raised by unireduce.

Every error carries the measured quantities that triggered it so the
command-line layer can print reproduction data.
"""


class UnireduceError(Exception):
    """Base class for all errors raised by this package."""


class NotSquare(UnireduceError, ValueError):
    pass


class NotUnitary(UnireduceError, ValueError):
    def __init__(self, defect: float, tol: float):
        super().__init__(f"matrix is not unitary: ||M*M - I||_F = {defect:.3e} > {tol:.1e}")
        self.defect = defect
        self.tol = tol


class NearSingular(UnireduceError, ValueError):
    def __init__(self, smallest: float):
        super().__init__(f"matrix is numerically singular (smallest singular value {smallest:.3e})")
        self.smallest = smallest


class DependentInput(UnireduceError, ValueError):
    pass


class DimensionMismatch(UnireduceError, ValueError):
    pass


class NotUnitModulus(UnireduceError, ValueError):
    pass


class OutOfRange(UnireduceError, ValueError):
    pass


class LengthMismatch(UnireduceError, ValueError):
    pass


class NotSorted(UnireduceError, ValueError):
    pass


class PreconditionViolated(UnireduceError, ValueError):
    pass


class HypothesisViolated(PreconditionViolated):
    """The quantitative hypothesis of a construction does not hold."""

    def __init__(self, message: str, measured: float | None = None, limit: float | None = None):
        super().__init__(message)
        self.measured = measured
        self.limit = limit


class EpsTooLarge(HypothesisViolated):
    pass


class ProductNotOne(PreconditionViolated):
    pass


class SumTooSmall(HypothesisViolated):
    pass


class BoundViolation(UnireduceError, ArithmeticError):
    """A proven inequality failed numerically.

    Either the implementation is wrong or the input broke an upstream
    precondition; in both cases the numbers are worth looking at.
    """

    def __init__(self, what: str, measured: float, bound: float):
        super().__init__(f"{what}: measured {measured!r} exceeds bound {bound!r}")
        self.what = what
        self.measured = measured
        self.bound = bound


class SpreadViolation(BoundViolation):
    pass


class CapExceeded(UnireduceError, RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"group closure exceeded {cap} elements")
        self.cap = cap


class NoWitness(UnireduceError, ValueError):
    def __init__(self, element_index: int):
        super().__init__(f"element {element_index} is not a scalar multiple of a commutator")
        self.element_index = element_index


class VanishingInnerProduct(UnireduceError, ValueError):
    def __init__(self, element_index: int, modulus: float):
        super().__init__(f"<G xi, xi> vanishes for element {element_index} (|.| = {modulus:.3e})")
        self.element_index = element_index
        self.modulus = modulus


class ZeroAverage(UnireduceError, ArithmeticError):
    def __init__(self, norm: float):
        super().__init__(f"group average of xi vanished (norm {norm:.3e})")
        self.norm = norm


class HomomorphismFailure(UnireduceError, ArithmeticError):
    pass


class DegenerateSplit(UnireduceError, RuntimeError):
    pass


class AllComponentsZero(UnireduceError, ArithmeticError):
    pass


class AllComponentsBelowEps(UnireduceError, ArithmeticError):
    pass


class NotMonomial(UnireduceError, ValueError):
    pass


class NoCommonEigenvector(UnireduceError, ArithmeticError):
    """No common eigenvector exists; the measured defect is a lower-bound witness."""

    def __init__(self, eps: float, threshold: float):
        super().__init__(
            f"group has no common eigenvector; measured weak defect {eps:.6e} "
            f"(threshold 1/(3600 n^11) = {threshold:.6e})"
        )
        self.eps = eps
        self.threshold = threshold

    @property
    def consistent(self) -> bool:
        return self.eps >= self.threshold
