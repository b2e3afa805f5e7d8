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

from ..exception import DomainError
from . import base


class Uniform(base.TxTimeDistBase):
    """Transmission times uniform on ``[lo, hi]``.

    :param lo: Lower end in seconds, may be 0.
    :param hi: Upper end in seconds.
    """

    kind = 'uniform'

    def __init__(self, lo, hi):
        self.lo = float(lo)
        self.hi = base.check_positive('hi', hi)
        if not 0 <= self.lo < self.hi:
            raise DomainError('uniform bounds need 0 <= lo < hi, got '
                              'lo=%r hi=%r' % (self.lo, self.hi))

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def t_max(self):
        return self.hi

    def quantile(self, u):
        return self.lo + (self.hi - self.lo) * u

    def params(self):
        return {'lo': self.lo, 'hi': self.hi}
