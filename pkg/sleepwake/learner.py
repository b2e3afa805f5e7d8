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

"""Certainty-equivalence learning of the mean transmission time.

The learner sees the sampled chain of the simulator: step ``2c - 1`` is the
start of cycle ``c`` and step ``2c`` its end. Episode ``k`` begins at step
``2**k``; at that point the empirical mean of the collision-free
transmission times replaces the unknown ``E[T]`` and the fleet is
re-planned. The plan then stays frozen until the next episode.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import model
from . import planner
from . import simulator
from .exception import DomainError

LOG = logging.getLogger(__name__)


class ThetaEstimator:
    """Running mean of the transmission times of successful deliveries.

    Collisions never update the estimate. Until the first delivery the
    estimate is ``theta_init``.
    """

    def __init__(self, theta_init):
        if not theta_init > 0:
            raise DomainError('theta_init must be positive, got %r' %
                              theta_init)
        self.theta_init = float(theta_init)
        self.sum_service = 0.0
        self.n_samples = 0

    def observe(self, service_time, collided=False):
        if collided:
            return
        self.sum_service += service_time
        self.n_samples += 1

    def observe_many(self, service_times):
        service_times = np.asarray(service_times, dtype=float)
        self.sum_service += float(service_times.sum())
        self.n_samples += service_times.size

    @property
    def current_estimate(self):
        if not self.n_samples:
            return self.theta_init
        return self.sum_service / max(self.n_samples, 1)


@dataclasses.dataclass(frozen=True)
class LearnConfig:
    """Inputs of a learning run.

    The fleet is described by its weights, efficiencies and the sensing
    time in seconds; ``ts_ratio`` is unknown to the learner because it
    depends on ``E[T]``.
    """

    true_dist: typing.Any
    weights: typing.Tuple[float, ...]
    efficiencies: typing.Tuple[float, ...]
    sensing_time: float
    horizon: int
    theta_init: typing.Optional[float] = None
    gamma: float = 4.0
    seed: int = 0
    run_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'weights',
                           tuple(float(w) for w in self.weights))
        object.__setattr__(self, 'efficiencies',
                           tuple(float(b) for b in self.efficiencies))
        # Validates the shape and signs once, with the source index.
        model.Fleet.from_arrays(self.weights, self.efficiencies, 0.0)
        if self.theta_init is None:
            object.__setattr__(self, 'theta_init',
                               0.5 * self.true_dist.t_max)
        if not self.theta_init > 0:
            raise DomainError('theta_init must be positive, got %r' %
                              self.theta_init)
        if int(self.horizon) != self.horizon or self.horizon < 2:
            raise DomainError('horizon must be an integer >= 2, got %r' %
                              self.horizon)
        if not self.sensing_time >= 0:
            raise DomainError('sensing_time must be nonnegative, got %r' %
                              self.sensing_time)
        if not self.gamma > 0:
            raise DomainError('gamma must be positive, got %r' % self.gamma)

    @property
    def size(self):
        return len(self.weights)

    @property
    def regime(self):
        return self.fleet_at(self.true_dist.mean()).regime

    def fleet_at(self, theta):
        """The fleet the learner believes in when ``E[T] = theta``."""
        return model.Fleet.from_arrays(self.weights, self.efficiencies,
                                       self.sensing_time / theta, theta)


@dataclasses.dataclass(frozen=True)
class Episode:
    k: int
    start_index: int
    theta_used: float
    plan_used: model.SleepPlan
    first_cycle: int
    cycles: int


@dataclasses.dataclass(frozen=True)
class LearnTrace:
    """Per-step record of a learning run; ``steps`` runs from 1 to H.

    ``cumulative_cost`` sums ``w_l x peak`` (seconds) over the deliveries
    completed up to each step.
    """

    episodes: typing.Tuple[Episode, ...]
    steps: np.ndarray
    theta: np.ndarray
    samples: np.ndarray
    cumulative_cost: np.ndarray
    confidence: np.ndarray
    regret: typing.Optional[np.ndarray] = None

    @property
    def horizon(self):
        return int(self.steps[-1])

    @property
    def final_theta(self):
        return float(self.theta[-1])

    @property
    def episode_of_step(self):
        return np.array([episode_index(n) for n in self.steps])

    def with_regret(self, oracle_cost_per_step):
        return dataclasses.replace(
            self, regret=empirical_regret(self, oracle_cost_per_step))


def episode_index(n):
    """Index ``k`` of the episode containing step ``n``: ``2**k <= n``."""
    n = int(n)
    if n < 1:
        raise DomainError('steps are numbered from 1, got %r' % n)
    return n.bit_length() - 1


def confidence_radius(n, samples, gamma, t_max):
    """``t_max * sqrt(2 log(n**gamma) / N)``; infinite when ``N = 0``."""
    if n < 1:
        raise DomainError('n must be at least 1, got %r' % n)
    if samples <= 0:
        return math.inf
    return t_max * math.sqrt(2.0 * gamma * math.log(n) / samples)


def _confidence_series(steps, samples, gamma, t_max):
    with np.errstate(divide='ignore'):
        xi = t_max * np.sqrt(2.0 * gamma * np.log(steps) /
                             np.maximum(samples, 1))
    return np.where(samples > 0, xi, np.inf)


def certainty_equivalent_plan(config, theta):
    """The plan the learner uses when its estimate of E[T] is ``theta``."""
    return planner.plan(config.fleet_at(theta))


def _episode_bounds(total_cycles):
    """``(k, first_cycle, last_cycle)`` per episode, cycles from 1."""
    k, first = 0, 1
    while first <= total_cycles:
        last = 1 if k == 0 else 2 ** k
        yield k, first, min(last, total_cycles)
        first = last + 1
        k += 1


def _run(config, fixed_rates=None, record=True):
    weights = np.array(config.weights)
    size = config.size
    total_cycles = (config.horizon + 1) // 2
    regime = config.regime
    channel = simulator.Channel(size, config.true_dist, config.sensing_time,
                                config.seed, config.run_index)
    estimator = ThetaEstimator(config.theta_init)
    chunk = simulator.chunk_cycles(size)

    episodes = []
    cost_parts, sum_parts, count_parts = [], [], []
    total_cost = 0.0
    for k, first, last in _episode_bounds(total_cycles):
        theta = estimator.current_estimate
        if fixed_rates is None:
            solution = certainty_equivalent_plan(config, theta)
            # Regimes depend only on the efficiencies.
            assert solution.regime is regime
            plan = solution.plan
        else:
            # A fixed policy knows the true mean.
            theta = config.true_dist.mean()
            plan = model.SleepPlan(tuple(fixed_rates), regime)
        LOG.debug('episode %d from step %d: theta=%r rates=%r', k,
                  2 ** k, theta, plan.rates)
        episodes.append(Episode(k, 2 ** k, theta, plan, first,
                                last - first + 1))
        sleep_means = plan.sleep_means(theta)

        remaining = last - first + 1
        while remaining:
            batch = channel.draw(min(chunk, remaining), sleep_means)
            channel.commit(batch)
            remaining -= len(batch)
            winners = weights[batch.winner]
            cost = np.where(batch.success, winners * batch.peak, 0.0)
            service = np.where(batch.success, batch.service, 0.0)
            total_cost += math.fsum(cost)
            if record:
                cost_parts.append(cost)
                sum_parts.append(service)
                count_parts.append(batch.success)
            estimator.observe_many(batch.service[batch.success])

    if not record:
        return total_cost, estimator
    return _trace(config, episodes, np.concatenate(cost_parts),
                  np.concatenate(sum_parts), np.concatenate(count_parts))


def _trace(config, episodes, cycle_cost, cycle_service, cycle_success):
    horizon = config.horizon
    n_cycles = cycle_cost.size
    steps = np.arange(1, 2 * n_cycles + 1)

    # Start steps carry no cost and see the estimate of the previous cycle.
    cost = np.zeros(2 * n_cycles)
    cost[1::2] = cycle_cost
    served = np.cumsum(cycle_service)
    count = np.cumsum(cycle_success.astype(np.int64))
    served_steps = np.repeat(np.concatenate(([0.0], served)), 2)[1:-1]
    count_steps = np.repeat(np.concatenate(([0], count)), 2)[1:-1]
    with np.errstate(invalid='ignore', divide='ignore'):
        theta = np.where(count_steps > 0,
                         served_steps / np.maximum(count_steps, 1),
                         config.theta_init)

    steps = steps[:horizon]
    count_steps = count_steps[:horizon]
    return LearnTrace(
        episodes=tuple(episodes),
        steps=steps,
        theta=theta[:horizon],
        samples=count_steps,
        cumulative_cost=np.cumsum(cost)[:horizon],
        confidence=_confidence_series(steps, count_steps, config.gamma,
                                      config.true_dist.t_max),
    )


def run_ce_learning(config, fixed_rates=None):
    """Run the certainty-equivalence learner for ``config.horizon`` steps.

    :param config: The learning problem.
    :type config: :class:`LearnConfig`
    :param fixed_rates: Bypass learning and use these rates in every
        episode. Used to push the oracle policy through the same pipeline.
    :returns: :class:`LearnTrace`
    """
    trace = _run(config, fixed_rates)
    LOG.debug('learning finished after %d steps, theta=%r',
              trace.horizon, trace.final_theta)
    return trace


def oracle_rates(config):
    """Plan under the true mean transmission time."""
    return certainty_equivalent_plan(config, config.true_dist.mean()).plan


def estimate_oracle_cost(config, steps, seed=None):
    """Monte-Carlo cost per sampled step of the oracle policy.

    :param steps: Number of sampled steps to average over.
    :param seed: Seed of the oracle run; ``config.seed`` when omitted. The
        run uses the next run index, so its random numbers are independent
        of a learning run with the same seed.
    """
    oracle = dataclasses.replace(
        config, horizon=int(steps),
        seed=config.seed if seed is None else seed,
        run_index=config.run_index + 1)
    total, _ = _run(oracle, oracle_rates(config).rates, record=False)
    # A run covers whole cycles; the last one ends at step 2 * cycles.
    cycles = (oracle.horizon + 1) // 2
    return total / (2 * cycles)


def empirical_regret(trace, oracle_cost_per_step):
    """``R(n) = cumulative_cost(n) - n * oracle_cost_per_step``."""
    return trace.cumulative_cost - trace.steps * oracle_cost_per_step


def paired_regret(trace, oracle_trace):
    """Regret against an oracle run that saw the same random numbers."""
    if trace.steps.size != oracle_trace.steps.size:
        raise DomainError('traces of %d and %d steps cannot be paired' %
                          (trace.steps.size, oracle_trace.steps.size))
    return trace.cumulative_cost - oracle_trace.cumulative_cost


def loglog_slope(horizons, values):
    """Least-squares slope of ``log(values)`` against ``log(horizons)``."""
    horizons = np.asarray(horizons, dtype=float)
    values = np.asarray(values, dtype=float)
    if horizons.size < 2 or horizons.shape != values.shape:
        raise DomainError('need at least two matching points')
    if np.any(horizons <= 0) or np.any(values <= 0):
        raise DomainError('log-log slope needs positive values')
    slope, _ = np.polyfit(np.log(horizons), np.log(values), 1)
    return float(slope)
