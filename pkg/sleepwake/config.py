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

"""Experiment configuration files.

A configuration is a JSON object; see ``doc/source/user/config.rst`` for
the schema. Unknown keys are rejected at every level.
"""

import dataclasses
import json
import logging
import math
import typing

import numpy as np

from . import model
from . import scenarios
from . import simulator
from . import txtime
from .exception import ConfigError
from .exception import DomainError

LOG = logging.getLogger(__name__)

DEFAULT_WEIGHT_RANGE = (0.0, 10.0)
DEFAULT_EFFICIENCY_RANGE = (0.0, 1.0)


@dataclasses.dataclass(frozen=True)
class RandomFleet:
    """Independent uniform draws of weights and efficiencies.

    Instance ``i`` uses its own generator derived from
    ``(master_seed, i)``, so adding instances never changes earlier ones.
    """

    count: int
    master_seed: int
    weight_range: typing.Optional[typing.Tuple[float, float]] = None
    efficiency_range: typing.Tuple[float, float] = DEFAULT_EFFICIENCY_RANGE

    def draw(self, index=0, count=None, weight_range=None):
        count = self.count if count is None else count
        low, high = (self.weight_range or weight_range or
                     DEFAULT_WEIGHT_RANGE)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(index,))
        rng = np.random.default_rng(seq)
        # Draws land in (low, high] so a zero weight is impossible.
        weights = high - (high - low) * rng.random(count)
        low, high = self.efficiency_range
        efficiencies = high - (high - low) * rng.random(count)
        return weights, efficiencies


@dataclasses.dataclass(frozen=True)
class FleetSection:
    ts_ratio: float
    mean_tx_time: float
    weights: typing.Optional[typing.Tuple[float, ...]] = None
    efficiencies: typing.Optional[typing.Tuple[float, ...]] = None
    random: typing.Optional[RandomFleet] = None

    @property
    def sensing_time(self):
        return self.ts_ratio * self.mean_tx_time

    @property
    def size(self):
        if self.random is not None:
            return self.random.count
        return len(self.weights)

    def build(self, index=0, count=None, weight_range=None,
              efficiencies=None, ts_ratio=None):
        """Build one fleet instance.

        Explicit fleets ignore ``index``; random fleets draw instance
        ``index``. ``efficiencies`` (a scalar) overrides every source.
        """
        if self.random is not None:
            weights, drawn = self.random.draw(index, count, weight_range)
        else:
            weights, drawn = self.weights, self.efficiencies
        if efficiencies is not None:
            drawn = [efficiencies] * len(weights)
        return model.Fleet.from_arrays(
            weights, drawn,
            self.ts_ratio if ts_ratio is None else ts_ratio,
            self.mean_tx_time)


@dataclasses.dataclass(frozen=True)
class BatterySection:
    capacity_mah: float = 8.0
    voltage: float = 5.0
    avg_tx_power: float = 24.75e-3
    sleep_power: float = 0.0
    replenish_rate: float = 0.0
    lifetime_years: typing.Tuple[float, ...] = (5.0, 10.0, 15.0)

    def spec(self, years):
        return model.BatterySpec(
            initial_energy=model.mah_to_joules(self.capacity_mah,
                                               self.voltage),
            target_lifetime=years * model.SECONDS_PER_YEAR,
            replenish_rate=self.replenish_rate,
            avg_tx_power=self.avg_tx_power,
            sleep_power=self.sleep_power,
        )


@dataclasses.dataclass(frozen=True)
class RunSection:
    cycles: typing.Optional[int] = None
    sim_time: typing.Optional[float] = None
    deliveries: typing.Optional[int] = None
    horizon: typing.Optional[int] = None
    seeds: int = 1
    base_seed: int = 0
    instances: int = 1
    theta_init: typing.Optional[float] = None
    gamma: float = 4.0
    oracle_steps: int = 2 ** 20
    grid_points: int = 200
    timer_policy: str = 'resample'

    def stop(self):
        chosen = [(name, value) for name, value in (
            ('cycles', self.cycles), ('sim_time', self.sim_time),
            ('deliveries', self.deliveries)) if value is not None]
        if len(chosen) != 1:
            raise ConfigError('run needs exactly one of cycles, sim_time or '
                              'deliveries, got %s' %
                              (', '.join(n for n, _ in chosen) or 'none'))
        name, value = chosen[0]
        if name == 'cycles':
            return simulator.Cycles(value)
        if name == 'deliveries':
            return simulator.Deliveries(value)
        return simulator.SimTime(value)


@dataclasses.dataclass(frozen=True)
class SweepSection:
    ts_ratios: typing.Tuple[float, ...] = ()
    sizes: typing.Tuple[int, ...] = ()
    efficiencies: typing.Tuple[float, ...] = ()


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    fleet: FleetSection
    tx_dist: typing.Any
    run: RunSection
    sweep: SweepSection
    battery: BatterySection
    output: typing.Optional[str] = None

    def seeds(self, count=None):
        count = self.run.seeds if count is None else count
        return tuple(self.run.base_seed + i for i in range(count))


class _Section:
    """Strict reader for one JSON object."""

    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise ConfigError('%s must be an object' % path)
        self._data = dict(data)
        self._path = path

    def where(self, key):
        return '%s.%s' % (self._path, key) if self._path else key

    def pop(self, key, kind, default=None, required=False):
        if key not in self._data:
            if required:
                raise ConfigError('missing key %s' % self.where(key))
            return default
        value = self._data.pop(key)
        if value is None and not required:
            return default
        return _coerce(value, kind, self.where(key))

    def section(self, key):
        if key not in self._data or self._data[key] is None:
            self._data.pop(key, None)
            return None
        return _Section(self._data.pop(key), self.where(key))

    def raw(self):
        data, self._data = self._data, {}
        return data

    def finish(self):
        if self._data:
            raise ConfigError('unknown key(s) %s' % ', '.join(
                sorted(self.where(k) for k in self._data)))


def _coerce(value, kind, where):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError('%s must be a number, got %r' % (where, value))
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError('%s must be an integer, got %r' %
                              (where, value))
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError('%s must be a string, got %r' % (where, value))
        return value
    if isinstance(kind, tuple):
        item_kind, = kind
        if not isinstance(value, list):
            raise ConfigError('%s must be a list, got %r' % (where, value))
        return tuple(_coerce(v, item_kind, '%s[%d]' % (where, i))
                     for i, v in enumerate(value))
    raise TypeError(kind)


def _range(section, key, default):
    value = section.pop(key, (float,), default)
    if value is None:
        return None
    if len(value) != 2 or not 0 <= value[0] < value[1]:
        raise ConfigError('%s must be [low, high] with 0 <= low < high' %
                          section.where(key))
    return tuple(value)


def _positive(section, key, kind, default=None, required=False):
    value = section.pop(key, kind, default, required)
    if value is not None and not value > 0:
        raise ConfigError('%s must be positive, got %r' %
                          (section.where(key), value))
    return value


def _tx_dist(section):
    params = section.raw()
    kind = params.pop('kind', None)
    if not isinstance(kind, str):
        raise ConfigError('tx_dist.kind must name a distribution, one of: '
                          '%s' % ', '.join(txtime.available()))
    try:
        return txtime.load(kind, **params)
    except DomainError as err:
        raise ConfigError('tx_dist: %s' % err) from err


def _fleet(section, mean_tx_time):
    declared = section.pop('mean_tx_time', float)
    if declared is not None and abs(declared - mean_tx_time) > \
            1e-9 * mean_tx_time:
        raise ConfigError('tx_dist mean is %r s but fleet.mean_tx_time '
                          'declares %r s' % (mean_tx_time, declared))
    ts_ratio = section.pop('ts_ratio', float)
    sensing_time = section.pop('sensing_time', float)
    if (ts_ratio is None) == (sensing_time is None):
        raise ConfigError('fleet needs exactly one of ts_ratio or '
                          'sensing_time')
    if ts_ratio is None:
        ts_ratio = sensing_time / mean_tx_time
    if not ts_ratio >= 0 or not math.isfinite(ts_ratio):
        raise ConfigError('fleet.ts_ratio must be nonnegative, got %r' %
                          ts_ratio)

    weights = section.pop('weights', (float,))
    efficiencies = section.pop('efficiencies', (float,))
    random = section.section('random')
    section.finish()
    if random is not None:
        if weights is not None or efficiencies is not None:
            raise ConfigError('fleet takes either weights and efficiencies '
                              'or random, not both')
        spec = RandomFleet(
            count=_positive(random, 'count', int, required=True),
            master_seed=random.pop('master_seed', int, required=True),
            weight_range=_range(random, 'weight_range', None),
            efficiency_range=_range(random, 'efficiency_range',
                                    DEFAULT_EFFICIENCY_RANGE),
        )
        if spec.master_seed < 0:
            raise ConfigError('fleet.random.master_seed must be '
                              'non-negative')
        random.finish()
        return FleetSection(ts_ratio, mean_tx_time, random=spec)
    if weights is None or efficiencies is None:
        raise ConfigError('fleet needs weights and efficiencies, or random')
    try:
        model.Fleet.from_arrays(weights, efficiencies, ts_ratio,
                                mean_tx_time)
    except DomainError as err:
        raise ConfigError('fleet: %s' % err) from err
    return FleetSection(ts_ratio, mean_tx_time, weights, efficiencies)


def _run(section):
    if section is None:
        return RunSection()
    run = RunSection(
        cycles=_positive(section, 'cycles', int),
        sim_time=_positive(section, 'sim_time', float),
        deliveries=_positive(section, 'deliveries', int),
        horizon=section.pop('horizon', int),
        seeds=_positive(section, 'seeds', int, 1),
        base_seed=section.pop('base_seed', int, 0),
        instances=_positive(section, 'instances', int, 1),
        theta_init=_positive(section, 'theta_init', float),
        gamma=_positive(section, 'gamma', float, 4.0),
        oracle_steps=_positive(section, 'oracle_steps', int, 2 ** 20),
        grid_points=section.pop('grid_points', int, 200),
        timer_policy=section.pop('timer_policy', str, 'resample'),
    )
    section.finish()
    if run.base_seed < 0:
        raise ConfigError('run.base_seed must be non-negative')
    if run.horizon is not None and run.horizon < 2:
        raise ConfigError('run.horizon must be at least 2')
    if run.grid_points < 2:
        raise ConfigError('run.grid_points must be at least 2')
    if run.timer_policy not in simulator.TIMER_POLICIES:
        raise ConfigError('run.timer_policy must be one of %s' %
                          ', '.join(simulator.TIMER_POLICIES))
    return run


def _sweep(section):
    if section is None:
        return SweepSection()
    sweep = SweepSection(
        ts_ratios=section.pop('ts_ratios', (float,), ()),
        sizes=section.pop('sizes', (int,), ()),
        efficiencies=section.pop('efficiencies', (float,), ()),
    )
    section.finish()
    if any(not e >= 0 for e in sweep.ts_ratios):
        raise ConfigError('sweep.ts_ratios must be nonnegative')
    if any(m < 1 for m in sweep.sizes):
        raise ConfigError('sweep.sizes must be positive')
    if any(not b > 0 for b in sweep.efficiencies):
        raise ConfigError('sweep.efficiencies must be positive')
    return sweep


def _battery(section):
    if section is None:
        return BatterySection()
    battery = BatterySection(
        capacity_mah=_positive(section, 'capacity_mah', float, 8.0),
        voltage=_positive(section, 'voltage', float, 5.0),
        avg_tx_power=_positive(section, 'avg_tx_power', float, 24.75e-3),
        sleep_power=section.pop('sleep_power', float, 0.0),
        replenish_rate=section.pop('replenish_rate', float, 0.0),
        lifetime_years=section.pop('lifetime_years', (float,),
                                   (5.0, 10.0, 15.0)),
    )
    section.finish()
    if battery.sleep_power < 0 or battery.replenish_rate < 0:
        raise ConfigError('battery powers must be nonnegative')
    if any(not d > 0 for d in battery.lifetime_years):
        raise ConfigError('battery.lifetime_years must be positive')
    return battery


def parse_config(data):
    """Build an :class:`ExperimentConfig` from decoded JSON."""
    top = _Section(data, '')
    scenario = top.pop('scenario', str, required=True)
    known = scenarios.available()
    if scenario not in known:
        raise ConfigError('unknown scenario %r, available: %s' %
                          (scenario, ', '.join(known)))
    tx_section = top.section('tx_dist')
    if tx_section is None:
        raise ConfigError('missing key tx_dist')
    tx_dist = _tx_dist(tx_section)
    fleet_section = top.section('fleet')
    if fleet_section is None:
        raise ConfigError('missing key fleet')
    fleet = _fleet(fleet_section, tx_dist.mean())
    config = ExperimentConfig(
        scenario=scenario,
        fleet=fleet,
        tx_dist=tx_dist,
        run=_run(top.section('run')),
        sweep=_sweep(top.section('sweep')),
        battery=_battery(top.section('battery')),
        output=top.pop('output', str),
    )
    top.finish()
    return config


def load_config(path):
    """Read and validate the experiment file at ``path``.

    :raises ConfigError: if the file cannot be read or is invalid.
    """
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except OSError as err:
        raise ConfigError('cannot read %s: %s' % (path, err)) from err
    except ValueError as err:
        raise ConfigError('%s is not valid JSON: %s' % (path, err)) from err
    config = parse_config(data)
    LOG.debug('loaded %s scenario from %s', config.scenario, path)
    return config


def describe(config):
    """Diagnostics of a configuration, as ``(key, value)`` pairs."""
    fleet = config.fleet.build(0)
    supply = math.fsum(fleet.efficiencies)
    lines = [
        ('scenario', config.scenario),
        ('tx_dist', repr(config.tx_dist)),
        ('mean_tx_time_s', config.fleet.mean_tx_time),
        ('t_max_s', config.tx_dist.t_max),
        ('ts_ratio', config.fleet.ts_ratio),
        ('sensing_time_s', config.fleet.sensing_time),
        ('sources', fleet.size),
        ('sum_efficiency', supply),
        ('regime', fleet.regime.value),
    ]
    if config.fleet.random is not None:
        lines.append(('random_instances', config.run.instances))
    return lines
