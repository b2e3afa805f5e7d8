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

import abc
import math

from .. import model
from .. import planner
from ..exception import ConfigError
from ..exception import UnboundedRates


class ScenarioBase(metaclass=abc.ABCMeta):
    """Base class for experiment scenarios.

    A scenario splits an experiment into independent work items, in the
    order their rows must appear in the output, and turns each item into
    rows. Items and the configuration must pickle so that the runner can
    hand them to worker processes.
    """

    #: ``(column, description)`` pairs, in output order.
    columns = ()

    #: Whether work items follow the replication seeds. Deterministic
    #: scenarios replicate over fleet instances instead.
    replicates = False

    def check(self, config):
        """Validate scenario-specific settings.

        :returns: Informational notes for ``validate``.
        :raises ConfigError: when the configuration cannot be run.
        """
        return []

    @abc.abstractmethod
    def work_items(self, config, seeds):
        """Return the work items of the experiment.

        :param config: The experiment.
        :type config: :class:`~sleepwake.config.ExperimentConfig`
        :param seeds: Seeds of the replications.
        """

    @abc.abstractmethod
    def run_item(self, config, item):
        """Return the rows of one work item as dicts keyed by column."""

    def trace(self, config, seed, stream):
        """Write the tab-separated trace of one replication."""
        raise ConfigError('the %s scenario has no trace output' %
                          type(self).__name__)

    @property
    def column_names(self):
        return [name for name, _ in self.columns]


def instances(config):
    if config.fleet.random is None:
        return (0,)
    return tuple(range(config.run.instances))


def require_random_fleet(config, why):
    if config.fleet.random is None:
        raise ConfigError('%s needs a random fleet (fleet.random)' % why)


def require_bounded_rates(config, fleets):
    """Reject explicit energy-adequate fleets without a sensing time.

    Random fleets are only known per instance; the planner raises
    :class:`~sleepwake.exception.UnboundedRates` for them when the
    instance is run.
    """
    if config.fleet.random is not None:
        return
    for fleet in fleets:
        if (fleet.regime is model.Regime.ENERGY_ADEQUATE and
                not fleet.ts_ratio > 0):
            raise UnboundedRates(
                'sum(b) = %r puts the fleet in the energy-adequate regime, '
                'where ts_ratio = %r makes the rates unbounded' %
                (math.fsum(fleet.efficiencies), fleet.ts_ratio))


SUMMARY_COLUMNS = (
    ('sources', 'number of sources M'),
    ('regime', 'energy_adequate when sum(b) >= 1, else energy_scarce'),
    ('sum_efficiency', 'sum of the target power efficiencies b'),
    ('objective', 'weighted average peak age of the plan, units of E[T]'),
    ('objective_s', 'objective in seconds'),
    ('objective_per_source', 'objective divided by M'),
    ('lower_bound', 'analytic lower bound on the optimum, units of E[T]'),
    ('asymptote', 'limit of the optimum as ts_ratio goes to 0'),
    ('fixed_rate_objective', 'objective of the equal-rate baseline'),
    ('fixed_rate_per_source', 'baseline objective divided by M'),
    ('beta_star', 'broadcast water level beta*'),
    ('x_star', 'broadcast aggregate rate x*'),
)


def summarize(fleet):
    """The analytic columns shared by the sweeps."""
    solution = planner.plan(fleet)
    baseline = planner.fixed_rate_baseline(fleet)
    fixed = model.weighted_peak_age(fleet, baseline.rates)
    size = fleet.size
    return {
        'sources': size,
        'regime': solution.regime.value,
        'sum_efficiency': math.fsum(fleet.efficiencies),
        'objective': solution.upper_bound,
        'objective_s': solution.upper_bound * fleet.mean_tx_time,
        'objective_per_source': solution.upper_bound / size,
        'lower_bound': solution.lower_bound,
        'asymptote': solution.asymptote,
        'fixed_rate_objective': fixed,
        'fixed_rate_per_source': fixed / size,
        'beta_star': solution.plan.beta_star,
        'x_star': solution.plan.x_star,
    }
