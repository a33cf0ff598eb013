"""Structural parameters of the two-country economy.

Conventions used throughout the package:

* Countries are labelled ``"H"`` and ``"F"``.
* ``tau`` is the precision of an agent's prior about her *own* country's
  output mean, ``tau_star`` the precision of the prior about the foreign
  country's output mean.  Asymmetric information frictions are captured by
  ``tau_star <= tau``.
* Ages are 0 (young) and 1 (old); only those two cohorts trade.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

COUNTRIES = ("H", "F")
AGES = (0, 1)


class EblflowsError(Exception):
    """Base class for all package errors."""


class ParameterError(EblflowsError):
    """Invalid structural parameter or operation input."""


class EquilibriumError(EblflowsError):
    """The linear equilibrium is degenerate or invalid."""


class DataError(EblflowsError):
    """Malformed or inconsistent input data."""


class ConfigError(EblflowsError):
    """Invalid run configuration."""


def other_country(country: str) -> str:
    if country == "H":
        return "F"
    if country == "F":
        return "H"
    raise ParameterError(f"unknown country {country!r}, expected 'H' or 'F'")


@dataclass(frozen=True)
class PriorSpec:
    """Gaussian prior of one country's agents over the two output means.

    ``mean_domestic``/``precision_domestic`` describe the belief about the
    agents' own country, the ``_foreign`` pair the belief about the other
    country.  Precisions must be positive, and the foreign precision may not
    exceed the domestic one (equality gives the symmetric benchmark).
    """

    mean_domestic: float
    mean_foreign: float
    precision_domestic: float
    precision_foreign: float

    def __post_init__(self) -> None:
        if not self.precision_domestic > 0:
            raise ParameterError(
                f"precision_domestic must be positive, got {self.precision_domestic}"
            )
        if not self.precision_foreign > 0:
            raise ParameterError(
                f"precision_foreign must be positive, got {self.precision_foreign}"
            )
        if self.precision_foreign > self.precision_domestic:
            raise ParameterError(
                "precision_foreign must not exceed precision_domestic "
                f"({self.precision_foreign} > {self.precision_domestic})"
            )

    def mean(self, side: str) -> float:
        return self.mean_domestic if side == "domestic" else self.mean_foreign

    def precision(self, side: str) -> float:
        if side == "domestic":
            return self.precision_domestic
        if side == "foreign":
            return self.precision_foreign
        raise ParameterError(f"unknown prior side {side!r}")


@dataclass(frozen=True)
class Demographics:
    """Masses of market participants by country and age.

    ``phi_H`` and ``phi_F`` are ``(young, old)`` mass pairs.  The baseline
    economy gives every cohort a mass of 1/4.
    """

    phi_H: tuple[float, float] = (0.25, 0.25)
    phi_F: tuple[float, float] = (0.25, 0.25)

    def __post_init__(self) -> None:
        for country, pair in (("H", self.phi_H), ("F", self.phi_F)):
            if len(pair) != 2:
                raise ParameterError(f"phi_{country} must be a (young, old) pair")
            if any(m < 0 for m in pair):
                raise ParameterError(f"phi_{country} masses must be nonnegative: {pair}")
            if sum(pair) <= 0:
                raise ParameterError(f"country {country} needs at least one positive mass")

    def mass(self, country: str, age: int) -> float:
        if age not in AGES:
            raise ParameterError(f"age must be 0 or 1, got {age}")
        pair = self.phi_H if country == "H" else self.phi_F
        return pair[age]

    def country_mass(self, country: str) -> float:
        pair = self.phi_H if country == "H" else self.phi_F
        return pair[0] + pair[1]

    def country_share(self, country: str) -> float:
        """Country's share of the total mass of market participants."""
        total = self.country_mass("H") + self.country_mass("F")
        return self.country_mass(country) / total

    def replace_mass(self, country: str, age: int, value: float) -> "Demographics":
        pair = list(self.phi_H if country == "H" else self.phi_F)
        pair[age] = value
        if country == "H":
            return replace(self, phi_H=tuple(pair))
        return replace(self, phi_F=tuple(pair))


@dataclass(frozen=True)
class ModelParams:
    """All structural parameters of the two-country economy.

    The closed-form price solver additionally requires a single common prior
    mean ``common_prior_mean``; when it is left ``None`` it is filled in from
    the priors if all four prior means agree, otherwise it stays ``None`` and
    the solver rejects the configuration.
    """

    theta_H: float
    theta_F: float
    sigma_sq: float
    prior_H: PriorSpec
    prior_F: PriorSpec
    gamma: float
    R: float
    demographics: Demographics = Demographics()
    common_prior_mean: float | None = None

    def __post_init__(self) -> None:
        if not self.sigma_sq > 0:
            raise ParameterError(f"sigma_sq must be positive, got {self.sigma_sq}")
        if not self.gamma > 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not self.R > 1:
            raise ParameterError(f"gross risk-free return R must exceed 1, got {self.R}")
        if self.prior_H.precision_domestic != self.prior_F.precision_domestic:
            raise ParameterError(
                "domestic prior precisions must be identical across countries"
            )
        if self.prior_H.precision_foreign != self.prior_F.precision_foreign:
            raise ParameterError(
                "foreign prior precisions must be identical across countries"
            )
        if self.common_prior_mean is None:
            means = {
                self.prior_H.mean_domestic,
                self.prior_H.mean_foreign,
                self.prior_F.mean_domestic,
                self.prior_F.mean_foreign,
            }
            if len(means) == 1:
                object.__setattr__(self, "common_prior_mean", means.pop())

    @classmethod
    def from_primitives(
        cls,
        theta: float = 10.0,
        sigma_sq: float = 1.0,
        tau: float = 2.0,
        tau_star: float = 0.5,
        gamma: float = 2.0,
        R: float = 1.05,
        prior_mean: float | None = None,
        demographics: Demographics | None = None,
        theta_F: float | None = None,
    ) -> "ModelParams":
        """Build params from the scalar primitives used by the CLI and tests.

        ``prior_mean`` defaults to ``theta`` (priors centered on the truth).
        """
        m = theta if prior_mean is None else prior_mean
        prior = PriorSpec(m, m, tau, tau_star)
        return cls(
            theta_H=theta,
            theta_F=theta if theta_F is None else theta_F,
            sigma_sq=sigma_sq,
            prior_H=prior,
            prior_F=prior,
            gamma=gamma,
            R=R,
            demographics=demographics or Demographics(),
            common_prior_mean=m,
        )

    @property
    def tau(self) -> float:
        return self.prior_H.precision_domestic

    @property
    def tau_star(self) -> float:
        return self.prior_H.precision_foreign

    def theta(self, country: str) -> float:
        return self.theta_H if country == "H" else self.theta_F

    def prior(self, country: str) -> PriorSpec:
        return self.prior_H if country == "H" else self.prior_F

    def with_precisions(self, tau: float, tau_star: float) -> "ModelParams":
        """Copy of the params with replaced prior precisions on both sides."""
        new_H = replace(self.prior_H, precision_domestic=tau, precision_foreign=tau_star)
        new_F = replace(self.prior_F, precision_domestic=tau, precision_foreign=tau_star)
        return replace(self, prior_H=new_H, prior_F=new_F)

    def with_demographics(self, demographics: Demographics) -> "ModelParams":
        return replace(self, demographics=demographics)
