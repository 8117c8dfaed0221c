"""Global moduli (tau, eta) and the truncation policy every evaluation runs under."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DomainError

#: tolerance in lattice coordinates for pole / zero / termination detection
EPS_LATTICE = 1e-9


@dataclass(frozen=True)
class ModuliContext:
    """Modular parameter ``tau``, shift ``eta`` and the numerical policy.

    ``eps_term`` is the relative tail threshold for theta series and gamma
    products, ``k_max`` the hard cap on the number of terms per axis.
    """

    tau: complex = 2j
    eta: complex = 0.05 + 0.25j
    eps_term: float = 1e-16
    k_max: int = 256
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "eta", complex(self.eta))
        if self.tau.imag <= 0:
            raise DomainError(f"Im tau must be positive, got tau={self.tau}")
        if self.eps_term <= 0 or self.k_max < 1:
            raise DomainError("eps_term must be positive and k_max >= 1")

    @property
    def two_eta(self) -> complex:
        return 2 * self.eta

    def require_gamma_domain(self) -> None:
        if self.two_eta.imag <= 0:
            raise DomainError(f"Im(2 eta) must be positive for the elliptic gamma function, got eta={self.eta}")

    def with_moduli(self, tau: complex | None = None, eta: complex | None = None) -> ModuliContext:
        return replace(self, tau=self.tau if tau is None else tau, eta=self.eta if eta is None else eta)


DEFAULT_CONTEXT = ModuliContext()


def lattice_offset(w: complex, tau: complex) -> tuple[float, float]:
    """Distance of ``w`` from the lattice Z + tau Z, as (real, tau) coordinate residues."""
    n = w.imag / tau.imag
    m = (w - n * tau).real
    return abs(m - round(m)), abs(n - round(n))


def near_lattice_point(w: complex, tau: complex, eps: float = EPS_LATTICE) -> bool:
    dm, dn = lattice_offset(w, tau)
    return dm < eps and dn < eps


def near_integer(x: complex, eps: float = EPS_LATTICE) -> int | None:
    """Return the integer closest to ``x`` if ``x`` is one within ``eps``, else None."""
    k = round(x.real)
    if abs(x - k) < eps:
        return int(k)
    return None
