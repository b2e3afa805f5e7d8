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

from scipy import stats

from . import base


class TruncatedExponential(base.TxTimeDistBase):
    """Exponential transmission times cut off at ``t_max``.

    :param mean_raw: Mean of the exponential before truncation, seconds.
    :param t_max: Truncation point, seconds.
    """

    kind = 'truncated_exponential'

    def __init__(self, mean_raw, t_max):
        self.mean_raw = base.check_positive('mean_raw', mean_raw)
        self._t_max = base.check_positive('t_max', t_max)
        self._dist = stats.truncexpon(b=self._t_max / self.mean_raw,
                                      scale=self.mean_raw)

    def mean(self):
        return float(self._dist.mean())

    @property
    def t_max(self):
        return self._t_max

    def quantile(self, u):
        return self._dist.ppf(u)

    def params(self):
        return {'mean_raw': self.mean_raw, 't_max': self._t_max}
