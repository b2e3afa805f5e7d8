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


"""Tests for the experiment scenarios
"""

import io

from sleepwake import config
from sleepwake import exception
from sleepwake import scenarios
from sleepwake.scenarios import compare
from sleepwake.scenarios import learn
from sleepwake.scenarios import oracle
from sleepwake.scenarios import simulate
from sleepwake.scenarios import solve
from sleepwake.scenarios import sweeps
from sleepwake.tests import utils


def _rows(scenario, cfg, seeds=(0,)):
    scenario.check(cfg)
    rows = []
    for item in scenario.work_items(cfg, seeds):
        rows.extend(scenario.run_item(cfg, item))
    names = set(scenario.column_names)
    for row in rows:
        assert set(row) <= names, set(row) - names
    return rows


class TestLoader(utils.TestCase):

    def test_available(self):
        self.assertEqual(scenarios.available(), [
            'compare_baselines', 'learn', 'oracle', 'simulate', 'solve',
            'sweep_efficiency', 'sweep_lifetime', 'sweep_m',
            'sweep_ts_ratio'])

    def test_load(self):
        self.assertIsInstance(scenarios.load('solve'), solve.Solve)

    def test_unknown(self):
        self.assertRaises(exception.ConfigError, scenarios.load, 'nope')


class TestSolve(utils.TestCase):

    def test_row(self):
        row, = _rows(solve.Solve(), utils.experiment())
        self.assertAlmostEqual(row['beta_star'], 1.0 / 3.0)
        self.assertAlmostEqual(row['x_star'], 9.5124922, places=6)
        self.assertAlmostEqual(row['asymptote'], 14.0)
        self.assertAlmostEqual(row['sync_value'], 14.0)
        self.assertLessEqual(row['lower_bound'], row['upper_bound'])

    def test_zero_ts_ratio_scarce(self):
        row, = _rows(solve.Solve(), utils.experiment(
            weights=(1.0, 1.0), efficiencies=(0.2, 0.3), ts_ratio=0.0))
        self.assertEqual(row['regime'].value, 'energy_scarce')
        self.assertAllClose(row['rates'], (0.4, 0.6))
        self.assertEqual(row['gap_bound'], 0.0)
        self.assertAlmostEqual(row['objective'], 31.0 / 3.0)
        self.assertAlmostEqual(row['lower_bound'], row['upper_bound'])

    def test_zero_ts_ratio_adequate(self):
        self.assertRaises(exception.UnboundedRates, solve.Solve().check,
                          utils.experiment(ts_ratio=0.0))

    def test_zero_ts_ratio_random_instance(self):
        cfg = utils.experiment(
            ts_ratio=0.0,
            random=config.RandomFleet(count=4, master_seed=2,
                                      efficiency_range=(0.5, 1.0)))
        scenario = solve.Solve()
        scenario.check(cfg)
        self.assertRaises(exception.UnboundedRates, scenario.run_item,
                          cfg, 0)

    def test_random_instances(self):
        cfg = utils.experiment(
            random=config.RandomFleet(count=4, master_seed=2),
            run=config.RunSection(instances=3))
        rows = _rows(solve.Solve(), cfg)
        self.assertEqual([r['instance'] for r in rows], [0, 1, 2])


class TestSweeps(utils.TestCase):

    def test_ts_ratio_sweep(self):
        cfg = utils.experiment(sweep=config.SweepSection(
            ts_ratios=(1e-2, 1e-3, 1e-4, 1e-5)))
        rows = _rows(sweeps.SweepTsRatio(), cfg)
        values = [r['objective'] for r in rows]
        self.assertEqual(values, sorted(values, reverse=True))
        for row in rows:
            self.assertLessEqual(row['objective'], row['fixed_rate_objective'])

    def test_ts_ratio_sweep_reaches_zero(self):
        cfg = utils.experiment(
            weights=(1.0, 1.0), efficiencies=(0.2, 0.3),
            sweep=config.SweepSection(ts_ratios=(1e-2, 0.0)))
        first, last = _rows(sweeps.SweepTsRatio(), cfg)
        self.assertAlmostEqual(last['objective'], 31.0 / 3.0)
        self.assertLess(last['objective'], first['objective'])
        self.assertLessEqual(last['objective'], last['fixed_rate_objective'])

    def test_ts_ratio_sweep_zero_adequate(self):
        cfg = utils.experiment(sweep=config.SweepSection(
            ts_ratios=(1e-2, 0.0)))
        self.assertRaises(exception.UnboundedRates,
                          sweeps.SweepTsRatio().check, cfg)

    def test_sweep_needs_grid(self):
        self.assertRaises(exception.ConfigError, sweeps.SweepTsRatio().check,
                          utils.experiment())

    def test_size_sweep(self):
        cfg = utils.experiment(
            random=config.RandomFleet(count=3, master_seed=4),
            sweep=config.SweepSection(sizes=(2, 5)),
            run=config.RunSection(instances=2))
        rows = _rows(sweeps.SweepM(), cfg)
        self.assertEqual([(r['size'], r['instance']) for r in rows],
                         [(2, 0), (2, 1), (5, 0), (5, 1)])
        self.assertEqual([r['sources'] for r in rows], [2, 2, 5, 5])

    def test_size_sweep_needs_random_fleet(self):
        cfg = utils.experiment(sweep=config.SweepSection(sizes=(2, 5)))
        self.assertRaises(exception.ConfigError, sweeps.SweepM().check, cfg)

    def test_efficiency_sweep(self):
        cfg = utils.experiment(sweep=config.SweepSection(
            efficiencies=(0.2, 0.5)))
        rows = _rows(sweeps.SweepEfficiency(), cfg)
        self.assertEqual([r['regime'] for r in rows],
                         ['energy_scarce', 'energy_adequate'])

    def test_lifetime_sweep(self):
        cfg = utils.experiment(
            weights=(1.0, 2.0, 3.0), efficiencies=(1.0, 1.0, 1.0),
            ts_ratio=0.008, run=config.RunSection(cycles=5000),
            battery=config.BatterySection(lifetime_years=(5.0, 10.0)))
        rows = _rows(sweeps.SweepLifetime(), cfg)
        self.assertEqual(len(rows), 2)
        self.assertGreater(rows[0]['efficiency'], rows[1]['efficiency'])
        for row in rows:
            self.assertEqual(row['regime'], 'energy_scarce')
            self.assertIn('lifetime_met', row)
            self.assertGreater(row['min_estimated_lifetime_years'], 0)

    def test_lifetime_sweep_without_simulation(self):
        cfg = utils.experiment(
            battery=config.BatterySection(lifetime_years=(5.0,)))
        row, = _rows(sweeps.SweepLifetime(), cfg)
        self.assertNotIn('lifetime_met', row)


class TestCompare(utils.TestCase):

    def test_optimal_beats_fixed_rate(self):
        cfg = utils.experiment(
            random=config.RandomFleet(count=10, master_seed=12),
            ts_ratio=1e-3, run=config.RunSection(instances=100))
        rows = _rows(compare.CompareBaselines(), cfg)
        self.assertEqual(len(rows), 100)
        for row in rows:
            self.assertLessEqual(row['optimal'], row['fixed_rate'])
            self.assertGreaterEqual(row['ratio'], 1.0)
            self.assertLessEqual(row['asymptote'], row['optimal'])

    def test_zero_ts_ratio_scarce(self):
        cfg = utils.experiment(weights=(1.0, 1.0), efficiencies=(0.2, 0.3),
                               ts_ratio=0.0)
        row, = _rows(compare.CompareBaselines(), cfg)
        self.assertAlmostEqual(row['optimal'], row['asymptote'])
        self.assertAlmostEqual(row['fixed_rate_k'], 1.0 / 3.0)
        self.assertAlmostEqual(row['fixed_rate'], 12.0)


class TestOracle(utils.TestCase):

    def test_relative_gap(self):
        cfg = utils.experiment(ts_ratio=1e-4)
        row, = _rows(oracle.Oracle(), cfg)
        self.assertLessEqual(row['relative_gap'], 0.01)
        self.assertGreaterEqual(row['grid_objective'], row['lower_bound'])

    def test_too_many_sources(self):
        cfg = utils.experiment(weights=(1.0,) * 4, efficiencies=(0.5,) * 4)
        self.assertRaises(exception.ConfigError, oracle.Oracle().check, cfg)


class TestSimulate(utils.TestCase):

    def test_rows(self):
        cfg = utils.experiment(ts_ratio=0.008,
                               run=config.RunSection(cycles=50000))
        rows = _rows(simulate.Simulate(), cfg, seeds=(0, 1))
        self.assertEqual([(r['seed'], r['source']) for r in rows],
                         [(0, 0), (0, 1), (1, 0), (1, 1)])
        for row in rows:
            self.assertLess(abs(row['relative_error']), 0.05)

    def test_needs_stop(self):
        self.assertRaises(exception.ConfigError, simulate.Simulate().check,
                          utils.experiment())

    def test_trace(self):
        cfg = utils.experiment(run=config.RunSection(cycles=10))
        stream = io.StringIO()
        simulate.Simulate().trace(cfg, 0, stream)
        lines = stream.getvalue().splitlines()
        self.assertTrue(lines[0].startswith('# time_s:'))
        self.assertEqual(lines[5], 'time_s\tevent_kind\tsource_id\t'
                                   'service_time_s\tpeak_s')
        self.assertEqual(len(lines), 5 + 1 + 20)


class TestLearn(utils.TestCase):

    def _config(self):
        return utils.experiment(
            ts_ratio=0.008,
            run=config.RunSection(horizon=1000, oracle_steps=2 ** 14))

    def test_checkpoints(self):
        self.assertEqual(learn.checkpoints(1000),
                         [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1000])
        self.assertEqual(learn.checkpoints(64)[-2:], [32, 64])

    def test_rows(self):
        rows = _rows(learn.Learn(), self._config())
        self.assertEqual([r['n'] for r in rows], learn.checkpoints(1000))
        for row in rows:
            expected = (row['cumulative_cost'] -
                        row['n'] * row['oracle_cost_per_step'])
            self.assertAlmostEqual(row['regret'], expected)

    def test_needs_horizon(self):
        self.assertRaises(exception.ConfigError, learn.Learn().check,
                          utils.experiment())

    def test_solve_has_no_trace(self):
        self.assertRaises(exception.ConfigError, solve.Solve().trace,
                          utils.experiment(), 0, io.StringIO())
