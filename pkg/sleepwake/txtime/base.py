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

import abc

import numpy as np

from ..exception import DomainError


class TxTimeDistBase(metaclass=abc.ABCMeta):
    """Base class for transmission time distributions.

    A transmission time covers the packet transmission and the feedback
    delay, or the whole of a collision. Every distribution has bounded
    support in ``(0, t_max]``; all parameters are in seconds.
    """

    #: Entry point name of the plugin, used in reports and traces.
    kind = None

    @abc.abstractmethod
    def mean(self):
        """Return ``E[T]`` in seconds, computed in closed form."""

    @property
    @abc.abstractmethod
    def t_max(self):
        """Upper end of the support, in seconds."""

    @abc.abstractmethod
    def quantile(self, u):
        """Inverse CDF evaluated at ``u`` in ``(0, 1]``."""

    @abc.abstractmethod
    def params(self):
        """Return the constructor keyword arguments as a dict."""

    def sample(self, rng, size):
        """Draw ``size`` transmission times by inversion.

        :param rng: The generator that owns this stream.
        :type rng: numpy.random.Generator
        """
        # 1 - U lies in (0, 1], so no draw lands on a zero duration.
        return self.quantile(1.0 - rng.random(size))

    def __eq__(self, other):
        return (type(self) is type(other) and
                self.params() == other.params())

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params().items()))))

    def __repr__(self):
        args = ', '.join('%s=%r' % item for item in sorted(
            self.params().items()))
        return '%s(%s)' % (self.__class__.__name__, args)


def check_positive(name, value):
    value = float(value)
    if not value > 0 or not np.isfinite(value):
        raise DomainError('%s must be positive and finite, got %r' %
                          (name, value))
    return value
