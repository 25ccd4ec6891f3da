"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A caller passed a value outside an operation's domain."""


class ProtocolViolation(RuntimeError):
    """A party tried an action the primitive forbids (e.g. reusing a box)."""


class ResourceLimit(RuntimeError):
    """An exact computation was asked to exceed its enumeration cap."""
