"""Exception types shared across the toolkit."""


class IpctpError(Exception):
    """Base class for every error raised by this package."""


class InstanceInvalid(IpctpError, ValueError):
    """Problem data violates an instance invariant."""


class NoEligibleCrane(InstanceInvalid):
    """A shipment's bay cannot be reached by any quay crane."""


class MalformedSolution(IpctpError, ValueError):
    """Discrete decisions are structurally broken (missing/duplicate ids)."""


class CyclicOrdering(IpctpError):
    """Chosen sequences and interference orders contradict each other."""


class BudgetExceeded(IpctpError):
    """Exhaustive enumeration would exceed the combination budget."""


class NoFeasibleSolution(IpctpError):
    """No decision combination produced a feasible schedule."""


class ConfigInvalid(IpctpError, ValueError):
    """Generator configuration is out of range."""
