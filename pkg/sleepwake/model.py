#  Licensed under the Apache License, Version 2.0 (the "License"); you may
#  not use this file except in compliance with the License. You may obtain
#  a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#  WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#  License for the specific language governing permissions and limitations
#  under the License.

"""Closed-form model of the sleep-wake cycle.

Every quantity here is expressed in units of the mean transmission time
``E[T]``; multiply by :attr:`Fleet.mean_tx_time` to get seconds.
"""

import dataclasses
import enum
import logging
import math
import typing

import numpy as np

from .exception import DomainError
from .exception import OverflowDomainError

LOG = logging.getLogger(__name__)

# Largest sum(r) * ts_ratio we agree to exponentiate.
MAX_EXPONENT = 700.0

FEASIBILITY_TOLERANCE = 1e-12

SECONDS_PER_YEAR = 365 * 24 * 3600.0


class Regime(enum.Enum):
    ENERGY_ADEQUATE = 'energy_adequate'
    ENERGY_SCARCE = 'energy_scarce'


@dataclasses.dataclass(frozen=True)
class SourceParams:
    """Priority weight and target power efficiency of one source.

    :param weight: Dimensionless priority ``w_l``.
    :param power_efficiency: ``b_l = P_max,l / P_avg,l``.
    """

    weight: float
    power_efficiency: float

    def __post_init__(self):
        if not self.weight > 0 or not math.isfinite(self.weight):
            raise DomainError('weight must be positive, got %r' % self.weight)
        if (not self.power_efficiency > 0
                or not math.isfinite(self.power_efficiency)):
            raise DomainError('power efficiency must be positive, got %r' %
                              self.power_efficiency)


@dataclasses.dataclass(frozen=True)
class Fleet:
    """The inputs of the planning problem.

    :param sources: One :class:`SourceParams` per source, in order.
    :param ts_ratio: Sensing time over mean transmission time.
    :param mean_tx_time: Mean transmission time ``E[T]`` in seconds.
    """

    sources: typing.Tuple[SourceParams, ...]
    ts_ratio: float
    mean_tx_time: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'sources', tuple(self.sources))
        if not self.sources:
            raise DomainError('a fleet needs at least one source')
        if not self.ts_ratio >= 0 or not math.isfinite(self.ts_ratio):
            raise DomainError('ts_ratio must be nonnegative, got %r' %
                              self.ts_ratio)
        if not self.mean_tx_time > 0 or not math.isfinite(self.mean_tx_time):
            raise DomainError('mean_tx_time must be positive, got %r' %
                              self.mean_tx_time)

    @classmethod
    def from_arrays(cls, weights, efficiencies, ts_ratio, mean_tx_time=1.0):
        weights = list(weights)
        efficiencies = list(efficiencies)
        if len(weights) != len(efficiencies):
            raise DomainError('%d weights but %d efficiencies' %
                              (len(weights), len(efficiencies)))
        sources = []
        for index, (w, b) in enumerate(zip(weights, efficiencies)):
            try:
                sources.append(SourceParams(float(w), float(b)))
            except DomainError as err:
                raise DomainError('source %d: %s' % (index, err)) from err
        return cls(tuple(sources), float(ts_ratio), float(mean_tx_time))

    @property
    def size(self):
        return len(self.sources)

    @property
    def weights(self):
        return np.array([s.weight for s in self.sources])

    @property
    def efficiencies(self):
        return np.array([s.power_efficiency for s in self.sources])

    @property
    def sensing_time(self):
        """Carrier sensing time ``t_s`` in seconds."""
        return self.ts_ratio * self.mean_tx_time

    @property
    def regime(self):
        if math.fsum(self.efficiencies) >= 1.0:
            return Regime.ENERGY_ADEQUATE
        return Regime.ENERGY_SCARCE

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class SleepPlan:
    """Normalized sleep parameters; the mean sleep of source l is E[T]/r_l.

    ``beta_star`` and ``x_star`` are the two scalars broadcast to the
    sources. They are ``None`` for plans that do not come from the
    near-optimal solver (the fixed-rate baseline).
    """

    rates: typing.Tuple[float, ...]
    regime: Regime
    beta_star: typing.Optional[float] = None
    x_star: typing.Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'rates', tuple(float(r) for r in self.rates))
        as_rates(self.rates)

    def as_array(self):
        return np.array(self.rates)

    def sleep_means(self, mean_tx_time):
        """Mean sleep duration of every source, in seconds."""
        return mean_tx_time / self.as_array()


@dataclasses.dataclass(frozen=True)
class BatterySpec:
    """Battery budget of one source.

    :param initial_energy: ``B_l`` in joules.
    :param target_lifetime: ``D_l`` in seconds.
    :param replenish_rate: ``R_l`` in watts.
    :param avg_tx_power: ``P_avg,l``, power drawn while transmitting, watts.
    :param sleep_power: Power drawn while asleep, watts. Only used for the
        lifetime estimate of the energy audit.
    """

    initial_energy: float
    target_lifetime: float
    replenish_rate: float = 0.0
    avg_tx_power: float = 24.75e-3
    sleep_power: float = 0.0

    def __post_init__(self):
        for name in ('initial_energy', 'target_lifetime', 'avg_tx_power'):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError('%s must be positive, got %r' %
                                  (name, value))
        for name in ('replenish_rate', 'sleep_power'):
            value = getattr(self, name)
            if not value >= 0:
                raise DomainError('%s must be nonnegative, got %r' %
                                  (name, value))

    @property
    def max_power(self):
        """``P_max = B/D + R``, the power that meets the target lifetime."""
        return self.initial_energy / self.target_lifetime + self.replenish_rate


@dataclasses.dataclass(frozen=True)
class PeakAge:
    per_source: np.ndarray
    total: float
    total_seconds: float


@dataclasses.dataclass(frozen=True)
class Feasibility:
    feasible: bool
    slack: np.ndarray


@dataclasses.dataclass(frozen=True)
class CycleStatistics:
    """Per-cycle building blocks, normalized by E[T]."""

    cycles_between_successes: np.ndarray
    expected_idle: float
    expected_cycle: float
    collision_probability: float


def mah_to_joules(mah, volts):
    return mah * 1e-3 * 3600.0 * volts


def as_rates(rates):
    arr = np.asarray(rates, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError('rates must be a non-empty vector')
    bad = np.flatnonzero(~(arr > 0) | ~np.isfinite(arr))
    if bad.size:
        raise DomainError('rate of source %d must be positive and finite, '
                          'got %r' % (bad[0], arr[bad[0]]))
    return arr


def _prepare(rates, ts_ratio):
    arr = as_rates(rates)
    if not ts_ratio >= 0:
        raise DomainError('ts_ratio must be nonnegative, got %r' % ts_ratio)
    total = math.fsum(arr)
    exponent = total * ts_ratio
    if exponent > MAX_EXPONENT:
        raise OverflowDomainError(
            'sum(r) * ts_ratio = %g exceeds %g' % (exponent, MAX_EXPONENT))
    return arr, total


def access_probabilities(rates, ts_ratio):
    """Probability that each source wins a cycle without collision.

    ``alpha_l = r_l e^{r_l eps} / (e^{eps sum r} sum r)``.
    """
    arr, total = _prepare(rates, ts_ratio)
    return arr / total * np.exp((arr - total) * ts_ratio)


def cycle_statistics(rates, ts_ratio):
    arr, total = _prepare(rates, ts_ratio)
    alpha = arr / total * np.exp((arr - total) * ts_ratio)
    return CycleStatistics(
        cycles_between_successes=1.0 / alpha,
        expected_idle=1.0 / total,
        expected_cycle=1.0 / total + 1.0,
        collision_probability=float(max(0.0, 1.0 - math.fsum(alpha))),
    )


def peak_ages(rates, ts_ratio):
    """Average peak age of every source, in units of E[T]."""
    arr, total = _prepare(rates, ts_ratio)
    return np.exp((total - arr) * ts_ratio) * (1.0 + total) / arr + 1.0


def expected_weighted_peak_age(fleet, rates):
    """Total weighted average peak age of a fleet under ``rates``.

    :param fleet: The fleet being scheduled.
    :type fleet: :class:`Fleet`
    :param rates: Normalized sleep parameters, one per source.
    :returns: :class:`PeakAge` with the per-source values and the total,
        both in units of E[T], plus the total in seconds.
    """
    arr = as_rates(rates)
    if arr.size != fleet.size:
        raise DomainError('%d rates for %d sources' % (arr.size, fleet.size))
    per_source = peak_ages(arr, fleet.ts_ratio)
    total = math.fsum(fleet.weights * per_source)
    return PeakAge(per_source, total, total * fleet.mean_tx_time)


def weighted_peak_age(fleet, rates):
    """Shortcut for ``expected_weighted_peak_age(fleet, rates).total``."""
    return expected_weighted_peak_age(fleet, rates).total


def transmit_fractions(rates, ts_ratio):
    """Fraction of time each source spends transmitting (or colliding)."""
    arr, total = _prepare(rates, ts_ratio)
    miss = -np.expm1(-arr * ts_ratio)
    return (miss * total + arr * np.exp(-arr * ts_ratio)) / (total + 1.0)


def energy_feasible(fleet, rates):
    arr = as_rates(rates)
    if arr.size != fleet.size:
        raise DomainError('%d rates for %d sources' % (arr.size, fleet.size))
    slack = fleet.efficiencies - transmit_fractions(arr, fleet.ts_ratio)
    return Feasibility(bool(np.all(slack >= -FEASIBILITY_TOLERANCE)), slack)


def power_efficiency_from_battery(spec):
    """Target power efficiency ``b = (B/D + R) / P_avg``."""
    if not spec.target_lifetime > 0:
        raise DomainError('target lifetime must be positive')
    return spec.max_power / spec.avg_tx_power
