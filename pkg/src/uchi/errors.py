"""Exception hierarchy shared by every module of the package."""


class UchiError(Exception):
    """Base class for all package errors."""


class InputError(UchiError, ValueError):
    """Malformed or inadmissible input (bad prime, unknown name, shape mismatch)."""


class NotVeryGoodPrime(InputError):
    pass


class BudgetExceeded(UchiError):
    """A computation would need more basis monomials than the configured cap."""

    def __init__(self, required: int, cap: int, what: str = "basis monomials"):
        self.required = required
        self.cap = cap
        super().__init__(f"{what}: {required} required, cap is {cap}")


class ExtensionFieldRequired(UchiError):
    """An eigenvalue-dependent step needs eigenvalues outside the prime field."""


class CertificationError(UchiError):
    """A Jordan pair or semisimplicity certificate failed; names the failed clause."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class ConsistencyFailure(UchiError):
    """dim Z_chi = p^rank disagrees with regularity of chi."""
