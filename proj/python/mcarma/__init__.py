"""Levy-driven continuous-time linear state space (MCARMA) models.

Simulation, Whittle-type and quasi-maximum-likelihood estimation from
low-frequency samples, and the analytic asymptotic covariances of the
estimators.
"""

from ._mcarma import (
    Error,
    InvalidInputError,
    NumericalError,
    asymptotics,
    estimate,
    family_info,
    family_names,
    simulate,
    spectral_density,
    study,
)

__all__ = [
    "Error",
    "InvalidInputError",
    "NumericalError",
    "asymptotics",
    "estimate",
    "family_info",
    "family_names",
    "simulate",
    "spectral_density",
    "study",
]
