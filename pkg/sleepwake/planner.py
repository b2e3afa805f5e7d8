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

"""Near-optimal sleep plans and the bounds that certify them.
"""

import dataclasses
import functools
import logging
import math
import typing

import numpy as np
from scipy import optimize

from . import model
from .exception import DomainError
from .exception import NoRoot
from .exception import UnboundedRates
from .exception import UnsupportedProblem
from .exception import WrongRegime

LOG = logging.getLogger(__name__)

BETA_MAX_ITER = 200
BETA_RESIDUAL = 1e-12

# Largest equal rate probed by the fixed-rate baseline, and the aggregate
# rate it falls back to when the sensing time is zero.
RATE_CAP = 1e6

GRID_LOW = 1e-3
GRID_HIGH = 10.0
GRID_MAX_SOURCES = 3


@dataclasses.dataclass(frozen=True)
class RegimeSolution:
    """A plan together with its optimality certificate.

    All objective values are normalized by E[T].
    """

    plan: model.SleepPlan
    gap_constant: float
    gap_bound: float
    lower_bound: float
    upper_bound: float
    asymptote: float
    analytic_upper_bound: float

    @property
    def regime(self):
        return self.plan.regime

    @property
    def broadcast(self):
        """The ``(beta*, x*)`` pair each source derives its rate from."""
        return self.plan.beta_star, self.plan.x_star


@dataclasses.dataclass(frozen=True)
class SyncSolution:
    shares: np.ndarray
    value: float


@dataclasses.dataclass(frozen=True)
class TsZeroSolution:
    """Result of the nested method for a zero sensing time.

    ``rates`` is ``None`` at the limit of the energy-adequate regime, where
    the optimal rates diverge and only the channel shares stay finite.
    """

    y: float
    shares: np.ndarray
    rates: typing.Optional[np.ndarray]
    objective: float


@dataclasses.dataclass(frozen=True)
class GridResult:
    best_rates: typing.Optional[np.ndarray]
    best_objective: float
    evaluated: int


def _check_vectors(weights, efficiencies):
    w = np.asarray(weights, dtype=float)
    b = np.asarray(efficiencies, dtype=float)
    if w.ndim != 1 or w.shape != b.shape or w.size == 0:
        raise DomainError('weights and efficiencies must be non-empty '
                          'vectors of the same length')
    if not np.all(w > 0) or not np.all(b > 0):
        raise DomainError('weights and efficiencies must be positive')
    return w, b


def _shares(w, b, beta):
    return np.minimum(b, beta * np.sqrt(w))


def _water_level(w, b, target):
    """Solve ``sum(min(b_i, beta sqrt(w_i))) = target`` for beta."""
    supply = math.fsum(b)
    if supply < target:
        raise NoRoot('sum of efficiencies %r is below %r; no beta exists '
                     '(use the energy-scarce solution)' % (supply, target))
    high = float(np.max(b / np.sqrt(w)))
    if supply == target:
        return high

    def residual(beta):
        return math.fsum(_shares(w, b, beta)) - target

    beta = optimize.bisect(residual, 0.0, high, xtol=1e-300,
                           rtol=4 * np.finfo(float).eps,
                           maxiter=BETA_MAX_ITER, disp=False)

    # The residual is piecewise linear; once the clamped set is known the
    # root has a closed form.
    clamped = b <= beta * np.sqrt(w)
    free_mass = math.fsum(np.sqrt(w[~clamped]))
    if free_mass > 0:
        polished = (target - math.fsum(b[clamped])) / free_mass
        if abs(residual(polished)) < abs(residual(beta)):
            beta = polished
    LOG.debug('beta=%r residual=%r', beta, residual(beta))
    return beta


def solve_beta_star(weights, efficiencies):
    """Root of ``sum(min(b_i, beta sqrt(w_i))) = 1``.

    :raises NoRoot: if ``sum(b) < 1``.
    """
    w, b = _check_vectors(weights, efficiencies)
    return _water_level(w, b, 1.0)


def x_star_adequate(ts_ratio):
    """``-1/2 + sqrt(1/4 + 1/eps)``, written to avoid cancellation."""
    if ts_ratio == 0:
        raise UnboundedRates('x* diverges when ts_ratio is 0; '
                             'use plan_ts_zero for a zero sensing time')
    inv = 1.0 / ts_ratio
    return inv / (0.5 + math.sqrt(0.25 + inv))


def plan_energy_adequate(fleet):
    w, b = fleet.weights, fleet.efficiencies
    eps = fleet.ts_ratio
    x_star = x_star_adequate(eps)
    beta = solve_beta_star(w, b)
    shares = _shares(w, b, beta)
    rates = shares * x_star

    c1 = math.fsum(w / shares)
    asymptote = math.fsum(w / shares + w)
    plan = model.SleepPlan(tuple(rates), model.Regime.ENERGY_ADEQUATE,
                           beta_star=beta, x_star=x_star)
    return RegimeSolution(
        plan=plan,
        gap_constant=c1,
        gap_bound=2.0 * math.sqrt(eps) * c1,
        lower_bound=asymptote,
        upper_bound=model.weighted_peak_age(fleet, rates),
        asymptote=asymptote,
        analytic_upper_bound=math.fsum(
            w * math.exp(x_star * eps) * (1.0 + 1.0 / x_star) / shares + w),
    )


def feasibility_factors(efficiencies, ts_ratio):
    """The factors ``c_l`` that keep ``r_l = c_l b_l / (1 - sum b)``
    feasible.
    """
    b = np.asarray(efficiencies, dtype=float)
    supply = math.fsum(b)
    idle = 1.0 - supply
    # Same root as 2 b idle^2 / Q_l, with b * idle divided out.
    return 2.0 * idle / (
        idle + np.sqrt(idle * idle + 4.0 * (supply - b) * ts_ratio))


def plan_energy_scarce(fleet):
    w, b = fleet.weights, fleet.efficiencies
    eps = fleet.ts_ratio
    supply = math.fsum(b)
    if supply >= 1.0:
        raise WrongRegime('sum of efficiencies is %r >= 1; the fleet is '
                          'in the energy-adequate regime' % supply)
    idle = 1.0 - supply
    c = feasibility_factors(b, eps)
    x_star = float(np.min(c)) / idle
    beta = math.fsum(1.0 / np.sqrt(w))
    rates = b * x_star

    base = math.fsum(w / b)
    total_w = math.fsum(w)
    z = supply / idle
    plan = model.SleepPlan(tuple(rates), model.Regime.ENERGY_SCARCE,
                           beta_star=beta, x_star=x_star)
    c2 = math.fsum(w / (b * idle)) * (3.0 * supply - float(np.min(b)))
    return RegimeSolution(
        plan=plan,
        gap_constant=c2,
        gap_bound=eps * c2,
        lower_bound=base * math.exp(-z * eps) + total_w,
        upper_bound=model.weighted_peak_age(fleet, rates),
        asymptote=base + total_w,
        analytic_upper_bound=(base * math.exp(supply * x_star * eps)
                              * (1.0 / x_star + supply) + total_w),
    )


def plan(fleet):
    """Pick the regime from ``sum(b)`` and solve it.

    :param fleet: The fleet to schedule.
    :type fleet: :class:`~sleepwake.model.Fleet`
    :returns: :class:`RegimeSolution`
    """
    regime = fleet.regime
    LOG.debug('planning %d sources in the %s regime', fleet.size,
              regime.value)
    if regime is model.Regime.ENERGY_ADEQUATE:
        return plan_energy_adequate(fleet)
    return plan_energy_scarce(fleet)


def plan_ts_zero(fleet, y='limit'):
    """Nested solution of the problem with no sensing time.

    For a finite ``y`` (which fixes ``sum(r) = y - 1``) this is the optimal
    inner layer. ``'limit'`` returns the optimum of the outer layer.
    """
    w, b = fleet.weights, fleet.efficiencies
    supply = math.fsum(b)
    if y == 'limit':
        if supply >= 1.0:
            shares = _shares(w, b, solve_beta_star(w, b))
            return TsZeroSolution(math.inf, shares, None,
                                  math.fsum(w / shares + w))
        # Energy-scarce: every source is capped and the outer optimum is
        # the largest y for which the inner problem is feasible.
        y = 1.0 / (1.0 - supply)
        return TsZeroSolution(y, b, b * y, math.fsum(w / b + w))

    y = float(y)
    if not y > 1:
        raise DomainError('y must be larger than 1, got %r' % y)
    shares = _shares(w, b, _water_level(w, b, 1.0 - 1.0 / y))
    return TsZeroSolution(y, shares, shares * y, math.fsum(w / shares + w))


def synchronized_optimum(weights, efficiencies):
    """Optimal channel shares of a scheduler that coordinates the sources.
    """
    w, b = _check_vectors(weights, efficiencies)
    if math.fsum(b) >= 1.0:
        shares = _shares(w, b, solve_beta_star(w, b))
    else:
        shares = b.copy()
    return SyncSolution(shares, math.fsum(w / shares + w))


def _worst_slack(k, size, fleet):
    sigma = model.transmit_fractions(np.full(size, k), fleet.ts_ratio)
    return float(np.max(sigma - fleet.efficiencies))


def fixed_rate_baseline(fleet):
    """Largest equal sleep rate that meets every energy constraint.

    When no constraint ever binds the baseline matches the aggregate rate
    of the near-optimal plan instead.
    """
    size = fleet.size
    k_max = RATE_CAP
    if fleet.ts_ratio > 0:
        k_max = min(k_max, model.MAX_EXPONENT / (size * fleet.ts_ratio))
    slack = functools.partial(_worst_slack, size=size, fleet=fleet)

    if slack(k_max) <= 0:
        if fleet.ts_ratio > 0:
            k = plan(fleet).plan.x_star / size
        else:
            k = RATE_CAP / size
        LOG.debug('no binding energy constraint, equal rate %r', k)
    else:
        k = optimize.bisect(slack, 1e-12, k_max, xtol=1e-14, rtol=1e-14,
                            maxiter=BETA_MAX_ITER, disp=False)
        while slack(k) > 0:
            k = np.nextafter(k, 0.0)
    return model.SleepPlan((k,) * size, fleet.regime)


def _evaluate_shard(fleet, axes, first):
    """Best feasible point of the grid with ``r_1 = axes[0][first]``."""
    size = fleet.size
    eps = fleet.ts_ratio
    if size == 1:
        points = np.array([[axes[0][first]]])
    else:
        rest = np.meshgrid(*axes[1:], indexing='ij')
        points = np.column_stack(
            [np.full(rest[0].size, axes[0][first])] +
            [r.ravel() for r in rest])

    total = points.sum(axis=1)
    usable = total * eps <= model.MAX_EXPONENT
    total = np.where(usable, total, 0.0)
    sigma = ((-np.expm1(-points * eps)) * total[:, None] +
             points * np.exp(-points * eps)) / (total + 1.0)[:, None]
    feasible = usable & np.all(
        sigma <= fleet.efficiencies + model.FEASIBILITY_TOLERANCE, axis=1)
    if not feasible.any():
        return math.inf, None
    peaks = (np.exp((total[:, None] - points) * eps) *
             (1.0 + total)[:, None] / points + 1.0)
    objective = np.where(feasible, peaks @ fleet.weights, np.inf)
    best = int(np.argmin(objective))
    return float(objective[best]), points[best]


def grid_oracle(fleet, per_axis_points, executor=None):
    """Brute-force search over a logarithmic grid of rate vectors.

    :param fleet: At most three sources.
    :param per_axis_points: Grid points along each rate axis.
    :param executor: Optional :mod:`concurrent.futures` executor; shards of
        the grid (one per value of the first rate) are evaluated through its
        ``map``.
    """
    if fleet.size > GRID_MAX_SOURCES:
        raise UnsupportedProblem('grid oracle supports at most %d sources, '
                                 'got %d' % (GRID_MAX_SOURCES, fleet.size))
    if per_axis_points < 2:
        raise DomainError('need at least two grid points per axis')
    # Each axis spans the same multiples of that source's planned rate.
    scale = np.geomspace(GRID_LOW, GRID_HIGH, per_axis_points)
    axes = np.outer(plan(fleet).plan.as_array(), scale)
    evaluate = functools.partial(_evaluate_shard, fleet, axes)
    shards = range(per_axis_points)
    results = (executor.map(evaluate, shards) if executor
               else map(evaluate, shards))

    best_value, best_rates = math.inf, None
    for value, rates in results:
        if rates is None:
            continue
        # Ties go to the lexicographically smallest rate vector; shards
        # arrive in increasing order of the first rate.
        if value < best_value:
            best_value, best_rates = value, rates
    return GridResult(best_rates, best_value,
                      per_axis_points ** fleet.size)
