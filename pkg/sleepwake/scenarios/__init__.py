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

"""Experiment scenarios, loaded as stevedore drivers."""

from stevedore import driver
from stevedore import exception as stevedore_exc
from stevedore import extension

from ..exception import ConfigError

NAMESPACE = 'sleepwake.scenario'


def available():
    """Names of the installed scenarios."""
    return sorted(extension.ExtensionManager(NAMESPACE).names())


def load(name):
    """Return an instance of the scenario registered as ``name``."""
    try:
        mgr = driver.DriverManager(
            namespace=NAMESPACE,
            name=name,
            invoke_on_load=True,
        )
    except stevedore_exc.NoMatches:
        raise ConfigError('unknown scenario %r, available: %s' %
                          (name, ', '.join(available()))) from None
    return mgr.driver
