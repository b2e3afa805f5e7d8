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

"""Transmission time distributions, loaded as stevedore drivers."""

import logging

from stevedore import driver
from stevedore import exception as stevedore_exc
from stevedore import extension

from ..exception import ConfigError

LOG = logging.getLogger(__name__)

NAMESPACE = 'sleepwake.txtime'


def available():
    """Names of the installed distribution drivers."""
    return sorted(extension.ExtensionManager(NAMESPACE).names())


def load(kind, **params):
    """Instantiate the distribution registered as ``kind``.

    :param kind: Entry point name in the ``sleepwake.txtime`` namespace.
    :param params: Keyword arguments of the driver, in seconds.
    :raises ConfigError: for an unknown kind or bad parameter names.
    """
    try:
        mgr = driver.DriverManager(
            namespace=NAMESPACE,
            name=kind,
            invoke_on_load=True,
            invoke_kwds=params,
        )
    except stevedore_exc.NoMatches:
        raise ConfigError('unknown tx_dist kind %r, available: %s' %
                          (kind, ', '.join(available()))) from None
    except TypeError as err:
        raise ConfigError('bad parameters for tx_dist %r: %s' %
                          (kind, err)) from err
    LOG.debug('loaded %r', mgr.driver)
    return mgr.driver
