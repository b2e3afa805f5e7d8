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


"""Tests for sleepwake.output
"""

import io

import numpy as np

from sleepwake import learner
from sleepwake import model
from sleepwake import output
from sleepwake import simulator
from sleepwake.tests import utils
from sleepwake.txtime import deterministic


class TestFormatValue(utils.TestCase):

    def test_reals_keep_every_digit(self):
        self.assertEqual(output.format_value(0.1), '0.10000000000000001')
        for value in (1.0 / 3.0, 2.0 ** -40, 12345.678e9):
            self.assertEqual(float(output.format_value(value)), value)

    def test_numpy_scalars(self):
        self.assertEqual(output.format_value(np.float64(0.5)), '0.5')
        self.assertEqual(output.format_value(np.int64(7)), '7')
        self.assertEqual(output.format_value(np.bool_(True)), 'true')

    def test_special_values(self):
        self.assertEqual(output.format_value(None), '')
        self.assertEqual(output.format_value(True), 'true')
        self.assertEqual(output.format_value(float('inf')), 'inf')
        self.assertEqual(output.format_value(model.Regime.ENERGY_SCARCE),
                         'energy_scarce')

    def test_sequences(self):
        self.assertEqual(output.format_value((1.0, 2.5)), '1;2.5')
        self.assertEqual(output.format_value(np.array([1, 2])), '1;2')


class TestTableWriter(utils.TestCase):

    def test_layout(self):
        stream = io.StringIO()
        writer = output.TableWriter(stream, (('a', 'first'),
                                             ('b', 'second')))
        writer.write({'a': 1, 'b': 0.5})
        writer.write({'b': 'x'})
        self.assertEqual(stream.getvalue(),
                         '# a: first\n# b: second\na,b\n1,0.5\n,x\n')

    def test_tab_separated(self):
        stream = io.StringIO()
        writer = output.TableWriter(stream, (('a', 'first'),
                                             ('b', 'second')), '\t')
        writer.write_all([{'a': 1, 'b': 2}])
        self.assertEqual(stream.getvalue().splitlines()[-1], '1\t2')

    def test_unknown_column(self):
        writer = output.TableWriter(io.StringIO(), (('a', 'first'),))
        self.assertRaises(KeyError, writer.write, {'c': 1})


class TestRows(utils.TestCase):

    def test_event_rows(self):
        fleet = utils.make_fleet(utils.WEIGHTS_3, utils.EFFICIENCIES_3, 0.008)
        config = simulator.SimConfig(fleet, deterministic.Deterministic(1.0),
                                     0, simulator.Cycles(200))
        rows = list(output.event_rows(simulator.sampled_stream(
            config, [2.0, 5.0, 3.0])))
        self.assertEqual(len(rows), 400)
        names = {name for name, _ in output.EVENT_COLUMNS}
        for row in rows:
            self.assertTrue(set(row) <= names)
            if row['event_kind'] == 'delivery_end':
                self.assertEqual(row['service_time_s'], 1.0)
            else:
                self.assertNotIn('peak_s', row)

    def test_learn_trace_rows(self):
        config = learner.LearnConfig(deterministic.Deterministic(1.0),
                                     utils.WEIGHTS, utils.EFFICIENCIES,
                                     0.01, 16)
        trace = learner.run_ce_learning(config).with_regret(1.0)
        rows = list(output.learn_trace_rows(trace))
        self.assertEqual([r['n'] for r in rows], list(range(1, 17)))
        self.assertEqual([r['episode_k'] for r in rows[:4]], [0, 1, 1, 2])
        self.assertEqual(rows[0]['regret'], -1.0)
