"""Exception types shared across the package."""


class GeoEnergyError(Exception):
    pass


class DomainError(GeoEnergyError, ValueError):
    """Argument outside the domain of a function (e.g. x <= 0, |x| >= radius)."""


class PoleError(DomainError):
    """Evaluation at (or within the guard distance of) a pole."""


class UnsupportedOrderError(GeoEnergyError, ValueError):
    """Requested order exceeds a precomputed table or cache bound."""


class ConfigurationError(GeoEnergyError, ValueError):
    """Inconsistent kernel/expansion parameters."""


class ParityMismatchError(GeoEnergyError, ValueError):
    """Expansion built for one parity of N evaluated at the other."""
