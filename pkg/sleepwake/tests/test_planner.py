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

"""Tests for sleepwake.planner
"""

import concurrent.futures
import math

import numpy as np

from sleepwake import exception
from sleepwake import model
from sleepwake import planner
from sleepwake.tests import utils


class TestBetaStar(utils.TestCase):

    def test_equal_sources(self):
        self.assertAlmostEqual(planner.solve_beta_star([1, 1], [1, 1]), 0.5)

    def test_no_binding_constraint(self):
        self.assertAlmostEqual(
            planner.solve_beta_star(utils.WEIGHTS, utils.EFFICIENCIES),
            1.0 / 3.0, places=14)

    def test_one_clamped_source(self):
        # min(0.2, 2 beta) + min(0.8, beta) = 1 at beta = 0.8.
        self.assertAlmostEqual(
            planner.solve_beta_star([4.0, 1.0], [0.2, 0.8]), 0.8,
            places=14)

    def test_single_source(self):
        self.assertAlmostEqual(planner.solve_beta_star([1.0], [1.0]), 1.0)

    def test_clamped_three_sources(self):
        beta = planner.solve_beta_star(utils.WEIGHTS_3, utils.EFFICIENCIES_3)
        self.assertAlmostEqual(beta, 0.7 / 3.0, places=14)

    def test_residual(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 1000:
            size = int(rng.integers(1, 101))
            w = 10.0 - 10.0 * rng.random(size)
            b = 1.0 - rng.random(size)
            if b.sum() < 1.0:
                continue
            checked += 1
            beta = planner.solve_beta_star(w, b)
            shares = np.minimum(b, beta * np.sqrt(w))
            self.assertLess(abs(math.fsum(shares) - 1.0), 1e-12)

    def test_no_root(self):
        self.assertRaises(exception.NoRoot, planner.solve_beta_star,
                          [1.0, 1.0], [0.2, 0.3])

    def test_bad_vectors(self):
        self.assertRaises(exception.DomainError, planner.solve_beta_star,
                          [1.0, 1.0], [0.5])
        self.assertRaises(exception.DomainError, planner.solve_beta_star,
                          [1.0, 0.0], [0.5, 0.6])


class TestEnergyAdequate(utils.TestCase):

    def test_x_star(self):
        self.assertAlmostEqual(planner.x_star_adequate(0.01), 9.5124922,
                               places=6)

    def test_x_star_large_ts_ratio(self):
        # -1/2 + sqrt(1/4 + 1/eps) rounds to zero here.
        eps = 1e17
        self.assertAlmostEqual(planner.x_star_adequate(eps) * eps, 1.0,
                               places=9)

    def test_x_star_unbounded(self):
        self.assertRaises(exception.UnboundedRates, planner.x_star_adequate,
                          0.0)

    def test_plan(self):
        solution = planner.plan(utils.make_fleet())
        self.assertIs(solution.regime, model.Regime.ENERGY_ADEQUATE)
        self.assertAllClose(solution.plan.rates, [3.170831, 6.341661],
                            rtol=1e-6)
        beta, x_star = solution.broadcast
        self.assertAlmostEqual(beta, 1.0 / 3.0)
        self.assertAlmostEqual(x_star, 9.5124922, places=6)
        self.assertAlmostEqual(solution.asymptote, 14.0)
        self.assertAlmostEqual(solution.lower_bound, 14.0)

    def test_rates_follow_broadcast(self):
        fleet = utils.make_fleet(utils.WEIGHTS_3, utils.EFFICIENCIES_3, 0.008)
        solution = planner.plan(fleet)
        beta, x_star = solution.broadcast
        expected = np.minimum(fleet.efficiencies,
                              beta * np.sqrt(fleet.weights)) * x_star
        self.assertAllClose(solution.plan.rates, expected)

    def test_plan_is_feasible(self):
        rng = np.random.default_rng(11)
        for eps in (1e-2, 1e-3, 1e-4):
            for _ in range(20):
                fleet = utils.random_fleet(rng, 8, eps)
                if fleet.regime is not model.Regime.ENERGY_ADEQUATE:
                    continue
                rates = planner.plan(fleet).plan.rates
                self.assertTrue(model.energy_feasible(fleet, rates).feasible)

    def test_bounds_bracket_plan(self):
        fleet = utils.make_fleet(utils.WEIGHTS_3, utils.EFFICIENCIES_3, 0.008)
        solution = planner.plan(fleet)
        self.assertLessEqual(solution.lower_bound, solution.upper_bound)
        self.assertLessEqual(solution.upper_bound,
                             solution.analytic_upper_bound * (1 + 1e-12))

    def test_gap_is_bounded(self):
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 200:
            eps = (1e-3, 1e-4)[checked % 2]
            fleet = utils.random_fleet(rng, 6, eps)
            if fleet.regime is not model.Regime.ENERGY_ADEQUATE:
                continue
            s = planner.plan(fleet)
            self.assertLessEqual(s.upper_bound - s.lower_bound,
                                 1.2 * s.gap_bound)
            checked += 1

    def test_weight_scaling(self):
        fleet = utils.make_fleet(utils.WEIGHTS_3, utils.EFFICIENCIES_3, 0.008)
        scaled = utils.make_fleet([7.0 * w for w in utils.WEIGHTS_3],
                                  utils.EFFICIENCIES_3, 0.008)
        self.assertAllClose(planner.plan(scaled).plan.rates,
                            planner.plan(fleet).plan.rates)

    def test_ts_ratio_sweep_is_monotone(self):
        values = [planner.plan(utils.make_fleet(ts_ratio=eps)).upper_bound
                  for eps in (1e-2, 1e-3, 1e-4, 1e-5)]
        for bigger, smaller in zip(values, values[1:]):
            self.assertGreaterEqual(bigger, smaller)
        self.assertAlmostEqual(values[-1], 14.0, delta=0.1)


class TestEnergyScarce(utils.TestCase):

    def test_plan(self):
        fleet = utils.make_fleet((1.0, 1.0), (0.2, 0.3), 0.01)
        solution = planner.plan(fleet)
        self.assertIs(solution.regime, model.Regime.ENERGY_SCARCE)
        self.assertAllClose(planner.feasibility_factors([0.2, 0.3], 0.01),
                            [0.98828, 0.992126], rtol=1e-5)
        self.assertAlmostEqual(solution.plan.x_star, 1.97656, places=5)
        self.assertAllClose(solution.plan.rates, [0.395313, 0.592969],
                            rtol=1e-5)
        self.assertAlmostEqual(solution.plan.beta_star, 2.0)

    def test_zero_ts_ratio(self):
        fleet = utils.make_fleet((1.0, 1.0), (0.2, 0.3), 0.0)
        solution = planner.plan(fleet)
        self.assertAllClose(solution.plan.rates, [0.4, 0.6])
        sigma = model.transmit_fractions(solution.plan.rates, 0.0)
        self.assertAllClose(sigma, [0.2, 0.3], rtol=1e-12)
        self.assertAlmostEqual(solution.upper_bound, solution.asymptote)

    def test_plan_is_feasible(self):
        rng = np.random.default_rng(5)
        for eps in (1e-2, 1e-3, 1e-4, 0.0):
            for _ in range(20):
                fleet = utils.random_fleet(rng, 5, eps, supply_cap=0.9)
                if fleet.regime is not model.Regime.ENERGY_SCARCE:
                    continue
                rates = planner.plan(fleet).plan.rates
                self.assertTrue(model.energy_feasible(fleet, rates).feasible)

    def test_gap_is_bounded(self):
        rng = np.random.default_rng(9)
        for i in range(200):
            eps = (1e-3, 1e-4)[i % 2]
            # A supply cap below one keeps every draw energy-scarce.
            fleet = utils.random_fleet(rng, 5, eps, supply_cap=0.9)
            self.assertIs(fleet.regime, model.Regime.ENERGY_SCARCE)
            s = planner.plan(fleet)
            self.assertLessEqual(s.lower_bound, s.upper_bound)
            self.assertLessEqual(s.upper_bound - s.lower_bound,
                                 1.5 * s.gap_bound)

    def test_wrong_regime(self):
        self.assertRaises(exception.WrongRegime, planner.plan_energy_scarce,
                          utils.make_fleet())

    def test_lower_bound_below_asymptote(self):
        fleet = utils.make_fleet((1.0, 3.0), (0.2, 0.3), 0.01)
        solution = planner.plan(fleet)
        self.assertLess(solution.lower_bound, solution.asymptote)


class TestTsZero(utils.TestCase):

    def test_adequate_limit(self):
        result = planner.plan_ts_zero(utils.make_fleet(ts_ratio=0.0))
        self.assertEqual(result.y, math.inf)
        self.assertIsNone(result.rates)
        self.assertAllClose(result.shares, [1.0 / 3.0, 2.0 / 3.0])
        self.assertAlmostEqual(result.objective, 14.0)

    def test_scarce_limit(self):
        fleet = utils.make_fleet((1.0, 1.0), (0.2, 0.3), 0.0)
        result = planner.plan_ts_zero(fleet)
        self.assertAlmostEqual(result.y, 2.0)
        self.assertAllClose(result.rates, [0.4, 0.6])
        self.assertAlmostEqual(result.objective,
                               planner.plan(fleet).asymptote)

    def test_finite_y(self):
        fleet = utils.make_fleet((1.0, 1.0), (1.0, 1.0), 0.0)
        result = planner.plan_ts_zero(fleet, y=3.0)
        self.assertAllClose(result.rates, [1.0, 1.0])
        self.assertAlmostEqual(result.objective, 8.0)

    def test_objective_falls_with_y(self):
        fleet = utils.make_fleet(ts_ratio=0.0)
        values = [planner.plan_ts_zero(fleet, y=y).objective
                  for y in (2.0, 5.0, 50.0, 5000.0)]
        for bigger, smaller in zip(values, values[1:]):
            self.assertGreater(bigger, smaller)
        self.assertGreater(values[-1], 14.0)

    def test_y_must_exceed_one(self):
        self.assertRaises(exception.DomainError, planner.plan_ts_zero,
                          utils.make_fleet(ts_ratio=0.0), y=1.0)


class TestBaselines(utils.TestCase):

    def test_synchronized_matches_asymptote(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            fleet = utils.random_fleet(rng, 5, 1e-3)
            sync = planner.synchronized_optimum(fleet.weights,
                                                fleet.efficiencies)
            asymptote = planner.plan(fleet).asymptote
            self.assertAlmostEqual(sync.value, asymptote,
                                   delta=1e-10 * max(1.0, asymptote))

    def test_fixed_rate(self):
        fleet = utils.make_fleet((1.0, 1.0), (0.2, 0.2), 0.0)
        baseline = planner.fixed_rate_baseline(fleet)
        # k / (2k + 1) = 0.2
        self.assertAlmostEqual(baseline.rates[0], 1.0 / 3.0, places=9)
        self.assertTrue(model.energy_feasible(fleet, baseline.rates).feasible)
        self.assertIsNone(baseline.beta_star)

    def test_fixed_rate_no_binding_constraint(self):
        fleet = utils.make_fleet((1.0, 1.0), (1.0, 1.0), 0.0)
        baseline = planner.fixed_rate_baseline(fleet)
        self.assertEqual(baseline.rates, (5e5, 5e5))

    def test_fixed_rate_follows_plan_when_unconstrained(self):
        fleet = utils.make_fleet((1.0, 1.0), (1.0, 1.0), 0.01)
        baseline = planner.fixed_rate_baseline(fleet)
        x_star = planner.x_star_adequate(0.01)
        self.assertAllClose(baseline.rates, [x_star / 2] * 2)

    def test_optimal_beats_fixed_rate(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            fleet = utils.random_fleet(rng, 10, 1e-3)
            baseline = planner.fixed_rate_baseline(fleet)
            self.assertTrue(
                model.energy_feasible(fleet, baseline.rates).feasible)
            fixed = model.weighted_peak_age(fleet, baseline.rates)
            self.assertLessEqual(planner.plan(fleet).upper_bound, fixed)


class TestGridOracle(utils.TestCase):

    def test_single_source(self):
        fleet = utils.make_fleet((1.0,), (1.0,), 0.01)
        solution = planner.plan(fleet)
        grid = planner.grid_oracle(fleet, 200)
        self.assertEqual(grid.evaluated, 200)
        self.assertLessEqual(solution.lower_bound, grid.best_objective)
        self.assertLessEqual(grid.best_objective, solution.upper_bound)
        self.assertLessEqual(solution.upper_bound - grid.best_objective,
                             solution.gap_bound)

    def test_adequate_pair(self):
        fleet = utils.make_fleet((1.0, 4.0), (0.5, 0.9), 1e-4)
        solution = planner.plan(fleet)
        grid = planner.grid_oracle(fleet, 200)
        self.assertGreaterEqual(grid.best_objective, solution.lower_bound)
        gap = abs(solution.upper_bound - grid.best_objective)
        self.assertLessEqual(gap / solution.asymptote, 0.01)

    def test_scarce_pair(self):
        fleet = utils.make_fleet((1.0, 1.0), (0.2, 0.3), 1e-4)
        solution = planner.plan(fleet)
        grid = planner.grid_oracle(fleet, 200)
        self.assertGreaterEqual(grid.best_objective, solution.lower_bound)
        self.assertTrue(
            model.energy_feasible(fleet, grid.best_rates).feasible)
        gap = abs(solution.upper_bound - grid.best_objective)
        self.assertLessEqual(gap / solution.asymptote, 0.01)

    def test_random_instances_are_bracketed(self):
        # 201 points put the planned rates themselves on the grid.
        rng = np.random.default_rng(17)
        for i in range(1000):
            eps = (1e-4, 1e-2)[i % 2]
            fleet = utils.random_fleet(rng, 1 + (i // 2) % 2, eps)
            solution = planner.plan(fleet)
            grid = planner.grid_oracle(fleet, 201)
            self.assertTrue(math.isfinite(grid.best_objective))
            self.assertTrue(
                model.energy_feasible(fleet, grid.best_rates).feasible)
            self.assertGreaterEqual(grid.best_objective,
                                    solution.lower_bound * (1 - 1e-9))
            self.assertLessEqual(grid.best_objective,
                                 solution.upper_bound * (1 + 1e-9))

    def test_executor_gives_same_answer(self):
        fleet = utils.make_fleet((1.0, 4.0), (0.5, 0.9), 1e-3)
        serial = planner.grid_oracle(fleet, 40)
        with concurrent.futures.ThreadPoolExecutor(2) as executor:
            parallel = planner.grid_oracle(fleet, 40, executor)
        self.assertEqual(serial.best_objective, parallel.best_objective)
        self.assertAllClose(serial.best_rates, parallel.best_rates, rtol=0)

    def test_too_many_sources(self):
        fleet = utils.make_fleet((1.0,) * 4, (0.5,) * 4, 0.01)
        self.assertRaises(exception.UnsupportedProblem, planner.grid_oracle,
                          fleet, 10)

    def test_too_few_points(self):
        self.assertRaises(exception.DomainError, planner.grid_oracle,
                          utils.make_fleet(), 1)
