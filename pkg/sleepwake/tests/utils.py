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

import unittest

import numpy as np

from sleepwake import config
from sleepwake import model
from sleepwake.txtime import deterministic

# Running example: two sources, the second four times as important.
WEIGHTS = (1.0, 4.0)
EFFICIENCIES = (0.5, 0.9)

# A three-source fleet with one binding energy constraint.
WEIGHTS_3 = (1.0, 4.0, 2.5)
EFFICIENCIES_3 = (0.5, 0.9, 0.3)


def make_fleet(weights=WEIGHTS, efficiencies=EFFICIENCIES, ts_ratio=0.01,
               mean_tx_time=1.0):
    return model.Fleet.from_arrays(weights, efficiencies, ts_ratio,
                                   mean_tx_time)


def random_fleet(rng, size, ts_ratio, supply_cap=None):
    """Weights in (0, 10] and efficiencies in (0, 1].

    With ``supply_cap`` the efficiencies are rescaled so that they sum to
    at most that value.
    """
    weights = 10.0 - 10.0 * rng.random(size)
    efficiencies = 1.0 - rng.random(size)
    if supply_cap is not None:
        total = efficiencies.sum()
        if total > supply_cap:
            efficiencies *= supply_cap / total
    return model.Fleet.from_arrays(weights, efficiencies, ts_ratio)


def experiment(scenario='solve', weights=WEIGHTS,
               efficiencies=EFFICIENCIES, ts_ratio=0.01, tx_value=1.0,
               run=None, sweep=None, random=None, battery=None):
    """An :class:`ExperimentConfig` built without the plugin loader."""
    if random is not None:
        fleet = config.FleetSection(ts_ratio, tx_value, random=random)
    else:
        fleet = config.FleetSection(ts_ratio, tx_value, tuple(weights),
                                    tuple(efficiencies))
    return config.ExperimentConfig(
        scenario=scenario,
        fleet=fleet,
        tx_dist=deterministic.Deterministic(tx_value),
        run=run or config.RunSection(),
        sweep=sweep or config.SweepSection(),
        battery=battery or config.BatterySection(),
    )


class TestCase(unittest.TestCase):

    def assertAllClose(self, actual, expected, rtol=1e-9, atol=0.0):
        np.testing.assert_allclose(actual, expected, rtol=rtol, atol=atol)
