"""Posterior beliefs about output means under loss-based updating.

Agents learn about the unknown mean of a Gaussian output process from the
realizations they observed during their own lifetime.  Belief updating is a
KL-regularized loss minimization: the posterior minimizes the expected
weighted squared-error loss over observations plus ``rho`` times the KL
divergence from the Gaussian prior.  Special cases:

* ``rho = 1`` with constant weights: conjugate Gaussian updating restricted
  to the lifetime window (the experience-based learner used by the
  equilibrium model).
* ``rho = 0``: a frequentist point mass at the weighted sample mean.
* Geometric decay weights: recency bias within the lifetime window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .params import ParameterError, PriorSpec


@dataclass(frozen=True)
class WeightProfile:
    """How an agent weights the observations in her lifetime window.

    ``kind`` is one of ``"constant"`` (weight 1 on every lifetime
    observation, the maintained benchmark), ``"geometric"`` (decay factor
    ``beta`` in (0, 1), normalized to sum to one over the window, most
    recent observation weighted highest) or ``"custom"`` (weights supplied
    by the caller, used as given unless ``normalize`` is set).

    ``scaling_rho`` is the KL-regularization scale; ``0`` selects the
    frequentist point-mass posterior.
    """

    kind: str = "constant"
    beta: float | None = None
    custom_weights: tuple[float, ...] | None = None
    scaling_rho: float = 1.0
    normalize: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "geometric", "custom"):
            raise ParameterError(f"unknown weight profile kind {self.kind!r}")
        if self.scaling_rho < 0:
            raise ParameterError(f"scaling_rho must be nonnegative, got {self.scaling_rho}")
        if self.kind == "geometric":
            if self.beta is None or not 0 < self.beta < 1:
                raise ParameterError(f"geometric decay needs beta in (0,1), got {self.beta}")
        if self.kind == "custom":
            if not self.custom_weights:
                raise ParameterError("custom profile needs a nonempty weight sequence")
            if any(w < 0 for w in self.custom_weights):
                raise ParameterError("custom weights must be nonnegative")

    @classmethod
    def constant(cls, rho: float = 1.0) -> "WeightProfile":
        return cls(kind="constant", scaling_rho=rho)

    @classmethod
    def geometric(cls, beta: float, rho: float = 1.0) -> "WeightProfile":
        return cls(kind="geometric", beta=beta, scaling_rho=rho)

    @classmethod
    def custom(
        cls, weights: Sequence[float], rho: float = 1.0, normalize: bool = False
    ) -> "WeightProfile":
        return cls(
            kind="custom",
            custom_weights=tuple(float(w) for w in weights),
            scaling_rho=rho,
            normalize=normalize,
        )

    def weights(self, n_obs: int) -> np.ndarray:
        """Weights for a window of ``n_obs`` observations, oldest first."""
        if n_obs <= 0:
            raise ParameterError("no experience: the observation window is empty")
        if self.kind == "constant":
            return np.ones(n_obs)
        if self.kind == "geometric":
            # Most recent draw gets beta**0, the oldest beta**(n_obs-1);
            # normalized so the window weights sum to one.
            raw = np.asarray([self.beta ** (n_obs - 1 - k) for k in range(n_obs)])
            return raw / raw.sum()
        w = np.asarray(self.custom_weights, dtype=float)
        if len(w) != n_obs:
            raise ParameterError(
                f"custom profile has {len(w)} weights but the window has {n_obs} observations"
            )
        if self.normalize:
            total = w.sum()
            if total <= 0:
                raise ParameterError("cannot normalize custom weights that sum to zero")
            return w / total
        return w


@dataclass(frozen=True)
class PosteriorBelief:
    """Gaussian posterior over one country's output mean.

    ``variance`` doubles as the subjective one-step-ahead output variance
    used by the mean-variance demands.  ``weight_on_data`` is the convex
    weight the posterior mean places on the experience average (the rest
    goes to the prior mean); ``recency_weight`` is 1/(age+1), the per-draw
    weight inside the lifetime average.
    """

    mean: float
    variance: float
    weight_on_data: float
    recency_weight: float

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ParameterError(f"belief variance must be nonnegative, got {self.variance}")
        if not 0 <= self.weight_on_data <= 1:
            raise ParameterError(f"weight_on_data must lie in [0,1], got {self.weight_on_data}")


def belief_weights(age: int, precision: float, sigma_sq: float) -> tuple[float, float, float]:
    """Data weight, posterior variance and recency weight at a given age.

    Returns ``(w, variance, omega)`` with ``w = (age+1)/(age+1+precision*sigma_sq)``,
    ``variance = sigma_sq/(age+1+precision*sigma_sq)`` and ``omega = 1/(age+1)``.
    """
    if age < 0 or int(age) != age:
        raise ParameterError(f"age must be a nonnegative integer, got {age}")
    if precision <= 0:
        raise ParameterError(f"precision must be positive, got {precision}")
    if sigma_sq <= 0:
        raise ParameterError(f"sigma_sq must be positive, got {sigma_sq}")
    n = age + 1
    denom = n + precision * sigma_sq
    return n / denom, sigma_sq / denom, 1.0 / n


def experience_average(lifetime_obs: Sequence[float], profile: WeightProfile) -> float:
    """Profile-weighted average of the lifetime observations."""
    obs = np.asarray(lifetime_obs, dtype=float)
    if obs.size == 0:
        raise ParameterError("no experience: the observation window is empty")
    w = profile.weights(obs.size)
    total = w.sum()
    if total <= 0:
        raise ParameterError("profile weights sum to zero over the window")
    return float(w @ obs / total)


def posterior_gaussian(
    prior: PriorSpec,
    side: str,
    sigma_sq: float,
    lifetime_obs: Sequence[float],
    profile: WeightProfile | None = None,
) -> PosteriorBelief:
    """Gaussian posterior with age-based shrinkage toward the prior.

    The posterior variance is ``sigma_sq / (age+1 + tau*sigma_sq)`` and the
    mean is ``w * experience_average + (1-w) * prior_mean`` with
    ``w = (age+1)/(age+1+tau*sigma_sq)``, where ``tau`` is the prior
    precision on the requested ``side`` ("domestic" or "foreign") and
    ``age+1`` is the window length.  The weight profile only redistributes
    weight across the window; the amount of shrinkage is pinned by age.
    """
    if sigma_sq <= 0:
        raise ParameterError(f"sigma_sq must be positive, got {sigma_sq}")
    obs = np.asarray(lifetime_obs, dtype=float)
    if obs.size == 0:
        raise ParameterError("no experience: the observation window is empty")
    profile = profile or WeightProfile.constant()
    age = obs.size - 1
    tau = prior.precision(side)
    m = prior.mean(side)
    w, variance, omega = belief_weights(age, tau, sigma_sq)
    avg = experience_average(obs, profile)
    return PosteriorBelief(
        mean=w * avg + (1.0 - w) * m,
        variance=variance,
        weight_on_data=w,
        recency_weight=omega,
    )


def posterior_general(
    loss_weights: WeightProfile,
    prior: PriorSpec,
    side: str,
    sigma_sq: float,
    lifetime_obs: Sequence[float],
) -> PosteriorBelief:
    """Posterior from the KL-regularized loss with arbitrary weights.

    For ``rho > 0`` this is the exponential-reweighting posterior: Gaussian
    with precision ``sum(weights)/(rho*sigma_sq) + tau`` whose mean mixes the
    weighted data average and the prior mean accordingly.  For ``rho = 0``
    the loss minimizer itself is returned: a degenerate belief (variance 0)
    at the weighted sample mean.  With constant weights and ``rho = 1`` the
    result coincides with :func:`posterior_gaussian`.
    """
    if sigma_sq <= 0:
        raise ParameterError(f"sigma_sq must be positive, got {sigma_sq}")
    obs = np.asarray(lifetime_obs, dtype=float)
    if obs.size == 0:
        raise ParameterError("no experience: the observation window is empty")
    rho = loss_weights.scaling_rho
    w = loss_weights.weights(obs.size)
    total = w.sum()
    if total <= 0:
        raise ParameterError("profile weights sum to zero over the window")
    age = obs.size - 1
    omega = 1.0 / (age + 1)
    weighted_mean = float(w @ obs / total)
    if rho == 0.0:
        return PosteriorBelief(
            mean=weighted_mean, variance=0.0, weight_on_data=1.0, recency_weight=omega
        )
    tau = prior.precision(side)
    m = prior.mean(side)
    data_precision = total / (rho * sigma_sq)
    precision = data_precision + tau
    weight_on_data = data_precision / precision
    return PosteriorBelief(
        mean=weight_on_data * weighted_mean + (1.0 - weight_on_data) * m,
        variance=1.0 / precision,
        weight_on_data=weight_on_data,
        recency_weight=omega,
    )
