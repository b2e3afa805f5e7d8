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


class SleepwakeError(Exception):
    """Base class for all errors raised by sleepwake."""


class DomainError(SleepwakeError, ValueError):
    """A numeric input is outside the domain of the model."""


class OverflowDomainError(DomainError):
    """The exponent sum(r) * ts_ratio is too large to evaluate."""


class NoRoot(DomainError):
    """The water-filling equation for beta has no root (sum(b) < 1)."""


class UnboundedRates(DomainError):
    """The energy-adequate solution diverges because ts_ratio is zero."""


class WrongRegime(DomainError):
    """A regime-specific solver was called outside its regime."""


class UnsupportedProblem(SleepwakeError):
    """The request is valid but too large for the chosen method."""


class EmptyRunError(SleepwakeError):
    """A simulation or audit was asked to work on zero cycles."""


class ConfigError(SleepwakeError):
    """The experiment configuration is invalid."""
