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


"""Parameter sweeps over the analytic model.

Each sweep emits one row per grid point and fleet instance, in that order,
with the near-optimal plan, the equal-rate baseline and the objective per
source. Sweeps over the number of sources and over the battery lifetime
draw weights from ``[0, 2]`` unless the fleet sets its own range.
"""

import logging

import numpy as np

from .. import model
from .. import planner
from .. import simulator
from ..exception import ConfigError
from . import base

LOG = logging.getLogger(__name__)

NARROW_WEIGHTS = (0.0, 2.0)


class _Sweep(base.ScenarioBase):

    #: Attribute of the sweep section holding the grid, and its column.
    grid = None
    parameter = None

    def grid_values(self, config):
        values = getattr(config.sweep, self.grid)
        if not values:
            raise ConfigError('the %s scenario needs sweep.%s' %
                              (type(self).__name__, self.grid))
        return values

    def check(self, config):
        values = self.grid_values(config)
        base.require_bounded_rates(
            config, (self.build(config, v, 0) for v in values))
        return []

    def work_items(self, config, seeds):
        return tuple((value, instance)
                     for value in self.grid_values(config)
                     for instance in base.instances(config))

    def build(self, config, value, instance):
        raise NotImplementedError()

    def run_item(self, config, item):
        value, instance = item
        fleet = self.build(config, value, instance)
        row = {self.parameter: value, 'instance': instance}
        row.update(base.summarize(fleet))
        return [row]


class SweepTsRatio(_Sweep):
    """Objective against the sensing time ratio."""

    grid = 'ts_ratios'
    parameter = 'ts_ratio'
    columns = ((('ts_ratio', 'sensing time over mean transmission time'),
                ('instance', 'fleet instance index')) +
               base.SUMMARY_COLUMNS)

    def build(self, config, value, instance):
        return config.fleet.build(instance, ts_ratio=value)


class SweepM(_Sweep):
    """Objective against the number of sources."""

    grid = 'sizes'
    parameter = 'size'
    columns = ((('size', 'number of sources drawn'),
                ('instance', 'fleet instance index')) +
               base.SUMMARY_COLUMNS)

    def check(self, config):
        base.require_random_fleet(config, 'the sweep over sizes')
        return super().check(config)

    def build(self, config, value, instance):
        return config.fleet.build(instance, count=value,
                                  weight_range=NARROW_WEIGHTS)


class SweepEfficiency(_Sweep):
    """Objective against a power efficiency shared by every source."""

    grid = 'efficiencies'
    parameter = 'efficiency'
    columns = ((('efficiency', 'power efficiency b of every source'),
                ('instance', 'fleet instance index')) +
               base.SUMMARY_COLUMNS)

    def build(self, config, value, instance):
        return config.fleet.build(instance, efficiencies=value)


class SweepLifetime(_Sweep):
    """Objective against the target battery lifetime.

    The battery section converts each lifetime into a power efficiency
    shared by every source. When the run section sets a stop condition the
    plan is also simulated, with seed ``run.base_seed + instance``, and
    audited against the battery budget.
    """

    parameter = 'lifetime_years'
    columns = ((('lifetime_years', 'target lifetime D, years'),
                ('instance', 'fleet instance index'),
                ('efficiency', 'power efficiency b = (B/D + R) / P_avg')) +
               base.SUMMARY_COLUMNS +
               (('max_power_w', 'power budget P_max of each source, watts'),
                ('max_actual_power_w', 'largest simulated power, watts'),
                ('lifetime_met', 'every source stays within P_max'),
                ('min_estimated_lifetime_years',
                 'shortest estimated battery lifetime, years')))

    def grid_values(self, config):
        return config.battery.lifetime_years

    def check(self, config):
        if not config.battery.lifetime_years:
            raise ConfigError('the lifetime sweep needs '
                              'battery.lifetime_years')
        if any(v is not None for v in (config.run.cycles,
                                       config.run.sim_time,
                                       config.run.deliveries)):
            config.run.stop()
        return super().check(config)

    def _efficiency(self, config, years):
        spec = config.battery.spec(years)
        return spec, model.power_efficiency_from_battery(spec)

    def build(self, config, value, instance):
        _spec, efficiency = self._efficiency(config, value)
        return config.fleet.build(instance, weight_range=NARROW_WEIGHTS,
                                  efficiencies=efficiency)

    def run_item(self, config, item):
        years, instance = item
        spec, efficiency = self._efficiency(config, years)
        fleet = self.build(config, years, instance)
        row = {'lifetime_years': years, 'instance': instance,
               'efficiency': efficiency, 'max_power_w': spec.max_power}
        row.update(base.summarize(fleet))
        if config.run.cycles or config.run.sim_time or config.run.deliveries:
            row.update(self._audit(config, fleet, spec, instance))
        return [row]

    def _audit(self, config, fleet, spec, instance):
        rates = planner.plan(fleet).plan.as_array()
        sim = simulator.SimConfig(fleet, config.tx_dist,
                                  config.run.base_seed + instance,
                                  config.run.stop(),
                                  timer_policy=config.run.timer_policy)
        report = simulator.run_simulation(sim, rates)
        audit = simulator.energy_audit(report, fleet, [spec] * fleet.size)
        LOG.info('lifetime %g years, instance %d: met=%s',
                 spec.target_lifetime / model.SECONDS_PER_YEAR, instance,
                 all(audit.lifetime_met))
        return {
            'max_actual_power_w': max(audit.actual_power),
            'lifetime_met': all(audit.lifetime_met),
            'min_estimated_lifetime_years': float(
                np.min(audit.estimated_lifetime)) / model.SECONDS_PER_YEAR,
        }
