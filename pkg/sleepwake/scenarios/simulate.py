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

from .. import model
from .. import output
from .. import planner
from .. import simulator
from . import base

LOG = logging.getLogger(__name__)


class Simulate(base.ScenarioBase):
    """Simulate the near-optimal plan and compare with the analytic model.

    Random fleets use instance 0. One row per source and seed.
    """

    replicates = True

    columns = (
        ('seed', 'simulation seed'),
        ('source', 'source index'),
        ('weight', 'priority weight w'),
        ('efficiency', 'target power efficiency b'),
        ('rate', 'normalized sleep rate r'),
        ('deliveries', 'measured successful deliveries'),
        ('peak_age_s', 'simulated average peak age, seconds'),
        ('peak_age_stddev_s', 'standard deviation of the peak age samples'),
        ('analytic_peak_age_s', 'analytic average peak age, seconds'),
        ('access_prob', 'fraction of measured cycles won by the source'),
        ('analytic_access_prob', 'analytic access probability'),
        ('transmit_fraction', 'fraction of measured time spent transmitting'),
        ('transmit_fraction_stderr', 'standard error of transmit_fraction'),
        ('analytic_transmit_fraction', 'analytic transmit fraction'),
        ('mean_inter_departure_s', 'mean time between deliveries, seconds'),
        ('weighted_peak_age_s', 'simulated sum of w x peak age, seconds'),
        ('analytic_weighted_peak_age_s', 'analytic sum of w x peak age'),
        ('relative_error', 'simulated / analytic weighted peak age - 1'),
        ('cycles', 'simulated cycles'),
        ('collisions', 'simulated collisions'),
        ('busy_wakeups', 'wake-ups that sensed the channel busy'),
        ('total_time_s', 'simulated time, seconds'),
    )

    def check(self, config):
        base.require_bounded_rates(config, [config.fleet.build(0)])
        config.run.stop()
        return []

    def work_items(self, config, seeds):
        return tuple(seeds)

    def _setup(self, config, seed):
        fleet = config.fleet.build(0)
        solution = planner.plan(fleet)
        sim = simulator.SimConfig(fleet, config.tx_dist, seed,
                                  config.run.stop(),
                                  timer_policy=config.run.timer_policy)
        return fleet, solution.plan.as_array(), sim

    def run_item(self, config, item):
        fleet, rates, sim = self._setup(config, item)
        LOG.info('simulating seed %d', item)
        report = simulator.run_simulation(sim, rates)
        scale = fleet.mean_tx_time
        analytic = model.expected_weighted_peak_age(fleet, rates)
        access = model.access_probabilities(rates, fleet.ts_ratio)
        sigma = model.transmit_fractions(rates, fleet.ts_ratio)
        error = (report.weighted_avg_peak_age / analytic.total_seconds - 1.0
                 if math.isfinite(report.weighted_avg_peak_age) else math.nan)
        rows = []
        for l, source in enumerate(report.per_source):
            rows.append({
                'seed': item,
                'source': l,
                'weight': fleet.sources[l].weight,
                'efficiency': fleet.sources[l].power_efficiency,
                'rate': rates[l],
                'deliveries': source.deliveries,
                'peak_age_s': source.peak_age_mean,
                'peak_age_stddev_s': source.peak_age_samples_stddev,
                'analytic_peak_age_s': analytic.per_source[l] * scale,
                'access_prob': source.empirical_access_prob,
                'analytic_access_prob': access[l],
                'transmit_fraction': source.empirical_transmit_fraction,
                'transmit_fraction_stderr': source.transmit_fraction_stderr,
                'analytic_transmit_fraction': sigma[l],
                'mean_inter_departure_s': source.mean_inter_departure,
                'weighted_peak_age_s': report.weighted_avg_peak_age,
                'analytic_weighted_peak_age_s': analytic.total_seconds,
                'relative_error': error,
                'cycles': report.cycles,
                'collisions': report.collisions,
                'busy_wakeups': report.busy_wakeups,
                'total_time_s': report.total_time,
            })
        return rows

    def trace(self, config, seed, stream):
        _fleet, rates, sim = self._setup(config, seed)
        writer = output.TableWriter(stream, output.EVENT_COLUMNS, '\t')
        writer.write_all(output.event_rows(
            simulator.sampled_stream(sim, rates)))
