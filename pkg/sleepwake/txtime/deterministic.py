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

import numpy as np

from . import base


class Deterministic(base.TxTimeDistBase):
    """Every transmission takes exactly ``value`` seconds."""

    kind = 'deterministic'

    def __init__(self, value):
        self.value = base.check_positive('value', value)

    def mean(self):
        return self.value

    @property
    def t_max(self):
        return self.value

    def quantile(self, u):
        return np.full(np.shape(u), self.value)

    def params(self):
        return {'value': self.value}
