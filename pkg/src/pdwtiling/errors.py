"""Exception hierarchy shared by the library and the command line."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class NoSuchTriangle(DomainError):
    """The angles violate one of the triangle existence inequalities."""


class SingularCotangent(DomainError):
    """An angle sits on a line where a cotangent is undefined or zero."""


class NotATile(DomainError):
    """The edge length does not solve the tile quadratic."""


class DegenerateTile(DomainError):
    """The construction degenerates (coincident great circles, flat corner)."""


class VerificationError(RuntimeError):
    """A realized tiling failed one of its defining checks."""
