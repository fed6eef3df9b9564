"""Exception types shared across the package."""


class ConeWeylError(ValueError):
    """Base class for all domain errors raised by this package."""


class DegreeError(ConeWeylError):
    """An operation received a cone function of the wrong homogeneity degree."""


class NotCoexactError(ConeWeylError):
    """A degree -2 function has a nonzero invariant integral, so no degree-0
    potential exists.  Carries the residual mean."""

    def __init__(self, mean, tol):
        self.mean = mean
        self.tol = tol
        super().__init__(
            f"invariant integral {mean!r} exceeds tolerance {tol!r}; "
            "no potential exists (nonzero charge index)"
        )


class NonIntegerChargeError(ConeWeylError):
    """The normalized invariant integral of c is not close to an integer.
    Carries the residual distance to the nearest integer."""

    def __init__(self, value, residual, tol):
        self.value = value
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"charge index {value!r} is {residual!r} away from the nearest "
            f"integer (tolerance {tol!r})"
        )


class ConeProximityError(ConeWeylError):
    """A spacetime point lies too close to the light cone for field
    evaluation; no regularization is attempted."""

    def __init__(self, x, margin):
        self.x = x
        self.margin = margin
        super().__init__(
            f"point {x!r} is within the cone margin {margin!r}; evaluation refused"
        )
