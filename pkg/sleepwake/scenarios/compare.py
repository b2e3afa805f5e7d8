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


from .. import model
from .. import planner
from . import base


class CompareBaselines(base.ScenarioBase):
    """Near-optimal plan against the equal-rate and synchronized schemes."""

    columns = (
        ('instance', 'fleet instance index'),
        ('sources', 'number of sources M'),
        ('regime', 'energy_adequate when sum(b) >= 1, else energy_scarce'),
        ('optimal', 'objective of the near-optimal plan, units of E[T]'),
        ('fixed_rate', 'objective of the equal-rate baseline'),
        ('fixed_rate_k', 'common sleep rate of the baseline'),
        ('ratio', 'fixed_rate / optimal'),
        ('synchronized', 'optimum of a synchronized scheduler'),
        ('asymptote', 'limit of the optimum as ts_ratio goes to 0'),
    )

    def check(self, config):
        base.require_bounded_rates(config, [config.fleet.build(0)])
        return []

    def work_items(self, config, seeds):
        return base.instances(config)

    def run_item(self, config, item):
        fleet = config.fleet.build(item)
        solution = planner.plan(fleet)
        baseline = planner.fixed_rate_baseline(fleet)
        fixed = model.weighted_peak_age(fleet, baseline.rates)
        sync = planner.synchronized_optimum(fleet.weights,
                                            fleet.efficiencies)
        return [{
            'instance': item,
            'sources': fleet.size,
            'regime': solution.regime,
            'optimal': solution.upper_bound,
            'fixed_rate': fixed,
            'fixed_rate_k': baseline.rates[0],
            'ratio': fixed / solution.upper_bound,
            'synchronized': sync.value,
            'asymptote': solution.asymptote,
        }]
