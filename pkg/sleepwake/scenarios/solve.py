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


import logging
import math

from .. import planner
from . import base

LOG = logging.getLogger(__name__)


class Solve(base.ScenarioBase):
    """The near-optimal plan of each fleet instance with its certificate."""

    columns = (
        ('instance', 'fleet instance index'),
        ('sources', 'number of sources M'),
        ('regime', 'energy_adequate when sum(b) >= 1, else energy_scarce'),
        ('sum_efficiency', 'sum of the target power efficiencies b'),
        ('beta_star', 'broadcast water level beta*'),
        ('x_star', 'broadcast aggregate rate x*'),
        ('objective', 'weighted average peak age of the plan, units of E[T]'),
        ('objective_s', 'objective in seconds'),
        ('lower_bound', 'analytic lower bound on the optimum, units of E[T]'),
        ('upper_bound', 'objective of the plan, an upper bound on the '
         'optimum'),
        ('analytic_upper_bound', 'closed-form upper bound, units of E[T]'),
        ('gap_constant', 'C1 (energy_adequate) or C2 (energy_scarce)'),
        ('gap_bound', 'leading-order optimality gap at this ts_ratio'),
        ('asymptote', 'limit of the optimum as ts_ratio goes to 0'),
        ('sync_value', 'optimum of a synchronized scheduler, units of E[T]'),
        ('rates', 'normalized sleep rates r_l, separated by ";"'),
        ('sleep_means_s', 'mean sleep durations E[T]/r_l, seconds'),
    )

    def check(self, config):
        base.require_bounded_rates(config, [config.fleet.build(0)])
        return []

    def work_items(self, config, seeds):
        return base.instances(config)

    def run_item(self, config, item):
        fleet = config.fleet.build(item)
        solution = planner.plan(fleet)
        sync = planner.synchronized_optimum(fleet.weights,
                                            fleet.efficiencies)
        LOG.info('instance %d: %s regime, objective %.6g', item,
                 solution.regime.value, solution.upper_bound)
        return [{
            'instance': item,
            'sources': fleet.size,
            'regime': solution.regime,
            'sum_efficiency': math.fsum(fleet.efficiencies),
            'beta_star': solution.plan.beta_star,
            'x_star': solution.plan.x_star,
            'objective': solution.upper_bound,
            'objective_s': solution.upper_bound * fleet.mean_tx_time,
            'lower_bound': solution.lower_bound,
            'upper_bound': solution.upper_bound,
            'analytic_upper_bound': solution.analytic_upper_bound,
            'gap_constant': solution.gap_constant,
            'gap_bound': solution.gap_bound,
            'asymptote': solution.asymptote,
            'sync_value': sync.value,
            'rates': solution.plan.rates,
            'sleep_means_s': solution.plan.sleep_means(fleet.mean_tx_time),
        }]
