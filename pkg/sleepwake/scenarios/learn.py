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

from .. import learner
from .. import model
from .. import output
from ..exception import ConfigError
from . import base

LOG = logging.getLogger(__name__)


def checkpoints(horizon):
    """Dyadic steps up to ``horizon``, plus ``horizon`` itself."""
    steps = [2 ** j for j in range(horizon.bit_length()) if 2 ** j <= horizon]
    if steps[-1] != horizon:
        steps.append(horizon)
    return steps


class Learn(base.ScenarioBase):
    """Certainty-equivalence learning of E[T] with regret measurement.

    The oracle cost per step comes from an independent run of the oracle
    policy of ``run.oracle_steps`` steps. Random fleets use instance 0.
    """

    replicates = True

    columns = (
        ('seed', 'learning run seed'),
        ('n', 'sampled step (powers of two and the horizon)'),
        ('episode_k', 'episode index k(n)'),
        ('theta_hat_s', 'estimate of the mean transmission time, seconds'),
        ('samples', 'collision-free deliveries seen so far, N(n)'),
        ('cumulative_cost', 'sum of weight x peak age over deliveries, '
         'seconds'),
        ('oracle_cost_per_step', 'Monte-Carlo cost per step of the oracle'),
        ('regret', 'cumulative_cost - n x oracle_cost_per_step'),
        ('regret_per_step', 'regret / n'),
        ('xi_s', 'confidence radius of theta_hat, seconds'),
    )

    def check(self, config):
        if config.run.horizon is None:
            raise ConfigError('the learn scenario needs run.horizon')
        learn = self._learn_config(config, config.run.base_seed)
        if (learn.sensing_time == 0 and
                learn.regime is model.Regime.ENERGY_ADEQUATE):
            raise ConfigError('learning in the energy_adequate regime needs a '
                              'positive sensing time')
        return []

    def _learn_config(self, config, seed):
        fleet = config.fleet.build(0)
        return learner.LearnConfig(
            true_dist=config.tx_dist,
            weights=tuple(fleet.weights),
            efficiencies=tuple(fleet.efficiencies),
            sensing_time=config.fleet.sensing_time,
            horizon=config.run.horizon,
            theta_init=config.run.theta_init,
            gamma=config.run.gamma,
            seed=seed,
        )

    def work_items(self, config, seeds):
        return tuple(seeds)

    def _trace(self, config, seed):
        learn = self._learn_config(config, seed)
        oracle = learner.estimate_oracle_cost(learn, config.run.oracle_steps)
        LOG.info('seed %d: oracle cost per step %.6g', seed, oracle)
        return learner.run_ce_learning(learn).with_regret(oracle), oracle

    def run_item(self, config, item):
        trace, oracle = self._trace(config, item)
        rows = []
        for n in checkpoints(trace.horizon):
            i = n - 1
            rows.append({
                'seed': item,
                'n': n,
                'episode_k': learner.episode_index(n),
                'theta_hat_s': trace.theta[i],
                'samples': trace.samples[i],
                'cumulative_cost': trace.cumulative_cost[i],
                'oracle_cost_per_step': oracle,
                'regret': trace.regret[i],
                'regret_per_step': trace.regret[i] / n,
                'xi_s': trace.confidence[i],
            })
        return rows

    def trace(self, config, seed, stream):
        trace, _oracle = self._trace(config, seed)
        writer = output.TableWriter(stream, output.LEARN_TRACE_COLUMNS, '\t')
        writer.write_all(output.learn_trace_rows(trace))
