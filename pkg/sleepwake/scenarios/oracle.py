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


from .. import planner
from ..exception import ConfigError
from . import base


class Oracle(base.ScenarioBase):
    """Brute-force check of the near-optimal plan on a rate grid."""

    columns = (
        ('instance', 'fleet instance index'),
        ('sources', 'number of sources M (at most 3)'),
        ('regime', 'energy_adequate when sum(b) >= 1, else energy_scarce'),
        ('grid_points', 'grid points per rate axis'),
        ('plan_objective', 'objective of the near-optimal plan'),
        ('grid_objective', 'best feasible objective on the grid'),
        ('lower_bound', 'analytic lower bound on the optimum'),
        ('upper_bound', 'objective of the plan, an upper bound'),
        ('relative_gap', '|plan_objective - grid_objective| / asymptote'),
        ('plan_rates', 'rates of the near-optimal plan'),
        ('grid_rates', 'rates of the best grid point'),
    )

    def check(self, config):
        base.require_bounded_rates(config, [config.fleet.build(0)])
        if config.fleet.size > planner.GRID_MAX_SOURCES:
            raise ConfigError('the grid oracle handles at most %d sources, '
                              'the fleet has %d' %
                              (planner.GRID_MAX_SOURCES, config.fleet.size))
        return []

    def work_items(self, config, seeds):
        return base.instances(config)

    def run_item(self, config, item):
        fleet = config.fleet.build(item)
        solution = planner.plan(fleet)
        points = config.run.grid_points
        grid = planner.grid_oracle(fleet, points)
        return [{
            'instance': item,
            'sources': fleet.size,
            'regime': solution.regime,
            'grid_points': points,
            'plan_objective': solution.upper_bound,
            'grid_objective': grid.best_objective,
            'lower_bound': solution.lower_bound,
            'upper_bound': solution.upper_bound,
            'relative_gap': (abs(solution.upper_bound - grid.best_objective) /
                             solution.asymptote),
            'plan_rates': solution.plan.rates,
            'grid_rates': grid.best_rates,
        }]
