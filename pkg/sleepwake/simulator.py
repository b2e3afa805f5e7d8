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

"""Continuous-time simulation of the sleep-wake protocol.

A cycle is an idle period, during which every source sleeps, followed by
one transmission or collision. The first source to wake up at ``u0`` senses
the channel for ``t_s`` and transmits during ``[u0 + t_s, u0 + t_s + T]``.
Any source waking in ``[u0, u0 + t_s)`` cannot detect it and joins a
collision. Sources waking later sense the channel busy and go back to
sleep. A packet is generated when its transmission starts and delivered
when it ends.

With the default ``resample`` timer policy every sleep timer is drawn
afresh at the end of each event, which makes the cycles independent and
lets them be simulated in vectorised batches. The ``preserve`` policy keeps
the residual timers of sources that did not take part in the event and is
simulated one cycle at a time.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import model
from .exception import DomainError
from .exception import EmptyRunError

LOG = logging.getLogger(__name__)

CHUNK_CYCLES = 65536
CHUNK_DRAWS = 4000000
WARMUP_FRACTION = 0.01

TIMER_POLICIES = ('resample', 'preserve')


@dataclasses.dataclass(frozen=True)
class Cycles:
    """Stop after exactly ``n`` cycles."""

    n: int

    @property
    def empty(self):
        return self.n <= 0

    def batch_size(self, channel, chunk):
        return min(chunk, self.n - channel.cycles)

    def cut(self, channel, batch):
        return min(len(batch), self.n - channel.cycles)

    def counted(self, batch):
        return batch.index >= self.n // 100

    def done(self, channel):
        return channel.cycles >= self.n


@dataclasses.dataclass(frozen=True)
class SimTime:
    """Stop after the first cycle that ends at or after ``seconds``."""

    seconds: float

    @property
    def empty(self):
        return not self.seconds > 0

    def batch_size(self, channel, chunk):
        return chunk

    def cut(self, channel, batch):
        hit = np.flatnonzero(batch.end >= self.seconds)
        return int(hit[0]) + 1 if hit.size else len(batch)

    def counted(self, batch):
        return batch.end >= WARMUP_FRACTION * self.seconds

    def done(self, channel):
        return channel.now >= self.seconds


@dataclasses.dataclass(frozen=True)
class Deliveries:
    """Stop right after the ``n``-th successful delivery."""

    n: int

    @property
    def empty(self):
        return self.n <= 0

    def batch_size(self, channel, chunk):
        return chunk

    def cut(self, channel, batch):
        reached = channel.deliveries + np.cumsum(batch.success)
        hit = np.flatnonzero(reached >= self.n)
        return int(hit[0]) + 1 if hit.size else len(batch)

    def counted(self, batch):
        return batch.delivered_before >= self.n // 100

    def done(self, channel):
        return channel.deliveries >= self.n


Stop = typing.Union[Cycles, SimTime, Deliveries]


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """Everything a simulation run needs besides the rates.

    :param fleet: The fleet; its ``mean_tx_time`` must match the mean of
        ``tx_dist``.
    :param tx_dist: A :class:`~sleepwake.txtime.base.TxTimeDistBase`.
    :param seed: Non-negative integer seed.
    :param stop: :class:`Cycles`, :class:`SimTime` or :class:`Deliveries`.
    :param sensing_time: ``t_s`` in seconds. Derived from the fleet when
        omitted, checked against it otherwise.
    :param run_index: Index of the run within a sweep; runs of the same seed
        with different indexes use independent streams.
    :param timer_policy: ``'resample'`` or ``'preserve'``.
    """

    fleet: model.Fleet
    tx_dist: typing.Any
    seed: int
    stop: Stop
    sensing_time: typing.Optional[float] = None
    run_index: int = 0
    timer_policy: str = 'resample'

    def __post_init__(self):
        declared = self.fleet.mean_tx_time
        actual = self.tx_dist.mean()
        if abs(actual - declared) > 1e-9 * declared:
            raise DomainError('tx_dist mean %r s does not match the declared '
                              'E[T] %r s' % (actual, declared))
        expected = self.fleet.sensing_time
        if self.sensing_time is None:
            object.__setattr__(self, 'sensing_time', expected)
        elif abs(self.sensing_time - expected) > 1e-9 * max(expected, 1e-300):
            raise DomainError('sensing_time %r s does not match ts_ratio x '
                              'E[T] = %r s' % (self.sensing_time, expected))
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise DomainError('seed must be a non-negative integer, got %r' %
                              (self.seed,))
        if self.timer_policy not in TIMER_POLICIES:
            raise DomainError('unknown timer policy %r' % self.timer_policy)


@dataclasses.dataclass(frozen=True)
class SourceReport:
    deliveries: int
    peak_age_mean: float
    peak_age_samples_stddev: float
    empirical_access_prob: float
    empirical_transmit_fraction: float
    transmit_fraction_stderr: float
    mean_inter_departure: float
    mean_cycles_between_successes: float


@dataclasses.dataclass(frozen=True)
class DeliveryLog:
    """Every delivery of a run in time order."""

    source: np.ndarray
    time: np.ndarray
    service_time: np.ndarray
    peak: np.ndarray
    counted: np.ndarray


@dataclasses.dataclass(frozen=True)
class SimReport:
    """Statistics of one run, in seconds.

    Per-source statistics only use the cycles after the warm-up.
    ``cycles``, ``collisions``, ``busy_wakeups`` and ``total_time`` cover
    the whole run.
    """

    per_source: typing.Tuple[SourceReport, ...]
    cycles: int
    collisions: int
    weighted_avg_peak_age: float
    total_time: float
    busy_wakeups: int
    measured_cycles: int
    measured_time: float
    log: typing.Optional[DeliveryLog] = None


@dataclasses.dataclass(frozen=True)
class AccessStart:
    source: int
    participants: typing.Tuple[int, ...]
    time: float

    kind = 'access_start'


@dataclasses.dataclass(frozen=True)
class DeliveryEnd:
    source: int
    service_time: float
    peak: float
    time: float
    counted: bool = True

    kind = 'delivery_end'


@dataclasses.dataclass(frozen=True)
class CollisionEnd:
    participants: typing.Tuple[int, ...]
    time: float

    kind = 'collision_end'


@dataclasses.dataclass(frozen=True)
class SampledState:
    ages: np.ndarray
    modes: np.ndarray
    sample_index: int


@dataclasses.dataclass(frozen=True)
class AuditResult:
    actual_power: typing.Tuple[float, ...]
    max_power: typing.Tuple[float, ...]
    lifetime_met: typing.Tuple[bool, ...]
    estimated_lifetime: typing.Tuple[float, ...]


@dataclasses.dataclass
class _Draws:
    """Cycle contents before they are placed on the time axis."""

    idle: np.ndarray
    winner: np.ndarray
    participants: np.ndarray
    service: np.ndarray
    busy: np.ndarray


@dataclasses.dataclass
class Batch:
    """Consecutive cycles placed on the time axis.

    ``peak`` and ``gap`` (the inter-departure time) are NaN for
    collisions.
    """

    index: np.ndarray
    start: np.ndarray
    tx_start: np.ndarray
    end: np.ndarray
    winner: np.ndarray
    participants: np.ndarray
    service: np.ndarray
    busy: np.ndarray
    success: np.ndarray
    peak: np.ndarray
    gap: np.ndarray
    delivered_before: np.ndarray

    def __len__(self):
        return len(self.index)

    def head(self, count):
        return Batch(**{f.name: getattr(self, f.name)[:count]
                        for f in dataclasses.fields(self)})


def generators(seed, run_index=0):
    """Independent wake-timer and transmission-time generators.

    Both derive from ``(seed, run_index)`` so that runs sharing a seed see
    the same random numbers whatever their rates are.
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(run_index),))
    wake, tx = seq.spawn(2)
    return np.random.default_rng(wake), np.random.default_rng(tx)


class _ResampledTimers:

    def __init__(self, rng_wake, rng_tx, tx_dist, sensing_time, size):
        self._wake = rng_wake
        self._tx = rng_tx
        self._tx_dist = tx_dist
        self._ts = sensing_time
        self._size = size

    def draw(self, count, sleep_means):
        offsets = -np.log1p(-self._wake.random((count, self._size)))
        offsets *= sleep_means
        winner = np.argmin(offsets, axis=1)
        idle = offsets[np.arange(count), winner]
        window = idle + self._ts
        participants = offsets < window[:, None]
        participants[np.arange(count), winner] = True
        service = self._tx_dist.sample(self._tx, count)
        busy = np.count_nonzero(
            (offsets >= window[:, None]) &
            (offsets < (window + service)[:, None]), axis=1)
        return _Draws(idle, winner, participants, service, busy)


class _PreservedTimers:

    def __init__(self, rng_wake, rng_tx, tx_dist, sensing_time, size):
        self._wake = rng_wake
        self._tx = rng_tx
        self._tx_dist = tx_dist
        self._ts = sensing_time
        self._size = size
        # Time left until each source wakes, from the current cycle start.
        self._residual = None

    def _sleep(self, mean):
        return -math.log1p(-self._wake.random()) * mean

    def draw(self, count, sleep_means):
        size, ts = self._size, self._ts
        if self._residual is None:
            self._residual = np.array([self._sleep(m) for m in sleep_means])
        idle = np.empty(count)
        winner = np.empty(count, dtype=np.intp)
        participants = np.zeros((count, size), dtype=bool)
        busy = np.zeros(count, dtype=np.int64)
        service = self._tx_dist.sample(self._tx, count)
        for c in range(count):
            residual = self._residual
            first = int(np.argmin(residual))
            window = residual[first] + ts
            joined = residual < window
            joined[first] = True
            end = window + service[c]
            for l in range(size):
                if joined[l]:
                    residual[l] = end + self._sleep(sleep_means[l])
                    continue
                while residual[l] < end:
                    busy[c] += 1
                    residual[l] += ts + self._sleep(sleep_means[l])
            self._residual = residual - end
            idle[c] = window - ts
            winner[c] = first
            participants[c] = joined
        return _Draws(idle, winner, participants, service, busy)


class Channel:
    """The shared channel, advanced in batches of cycles.

    :meth:`draw` places the next ``count`` cycles on the time axis without
    changing the channel; :meth:`commit` then accepts a prefix of them.
    """

    def __init__(self, size, tx_dist, sensing_time, seed, run_index=0,
                 timer_policy='resample'):
        rng_wake, rng_tx = generators(seed, run_index)
        timers = (_PreservedTimers if timer_policy == 'preserve'
                  else _ResampledTimers)
        self._timers = timers(rng_wake, rng_tx, tx_dist, sensing_time, size)
        self.size = size
        self.sensing_time = sensing_time
        self.now = 0.0
        self.cycles = 0
        self.deliveries = 0
        self.collisions = 0
        self.busy_wakeups = 0
        self.last_delivery = np.zeros(size)
        self.last_service = np.zeros(size)
        self.last_generation = np.zeros(size)

    def draw(self, count, sleep_means):
        d = self._timers.draw(count, np.asarray(sleep_means, dtype=float))
        ends = self.now + np.cumsum(d.idle + self.sensing_time + d.service)
        start = np.concatenate(([self.now], ends[:-1]))
        success = d.participants.sum(axis=1) == 1

        peak = np.full(count, np.nan)
        gap = np.full(count, np.nan)
        for l in range(self.size):
            mine = np.flatnonzero(success & (d.winner == l))
            if not mine.size:
                continue
            times = ends[mine]
            previous = np.concatenate(([self.last_delivery[l]], times[:-1]))
            served = np.concatenate(
                ([self.last_service[l]], d.service[mine][:-1]))
            gap[mine] = times - previous
            peak[mine] = served + gap[mine]

        return Batch(
            index=self.cycles + np.arange(count),
            start=start,
            tx_start=start + d.idle + self.sensing_time,
            end=ends,
            winner=d.winner,
            participants=d.participants,
            service=d.service,
            busy=d.busy,
            success=success,
            peak=peak,
            gap=gap,
            delivered_before=(self.deliveries + np.cumsum(success) -
                              success),
        )

    def commit(self, batch):
        if not len(batch):
            return
        self.now = float(batch.end[-1])
        self.cycles += len(batch)
        delivered = int(np.count_nonzero(batch.success))
        self.deliveries += delivered
        self.collisions += len(batch) - delivered
        self.busy_wakeups += int(batch.busy.sum())
        for l in range(self.size):
            mine = np.flatnonzero(batch.success & (batch.winner == l))
            if mine.size:
                last = mine[-1]
                self.last_delivery[l] = batch.end[last]
                self.last_service[l] = batch.service[last]
                self.last_generation[l] = batch.tx_start[last]


def chunk_cycles(size):
    return max(1, min(CHUNK_CYCLES, CHUNK_DRAWS // size))


def _batches(config, rates):
    """Yield ``(batch, counted)`` pairs until the stop condition is met."""
    stop = config.stop
    if stop.empty:
        raise EmptyRunError('stop condition %r leaves nothing to simulate' %
                            (stop,))
    rates = model.as_rates(rates)
    fleet = config.fleet
    if rates.size != fleet.size:
        raise DomainError('%d rates for %d sources' % (rates.size,
                                                       fleet.size))
    sleep_means = fleet.mean_tx_time / rates
    channel = Channel(fleet.size, config.tx_dist, config.sensing_time,
                      config.seed, config.run_index, config.timer_policy)
    chunk = chunk_cycles(fleet.size)
    if config.timer_policy == 'preserve':
        chunk = min(chunk, 4096)
    while not stop.done(channel):
        batch = channel.draw(stop.batch_size(channel, chunk), sleep_means)
        batch = batch.head(stop.cut(channel, batch))
        channel.commit(batch)
        yield batch, stop.counted(batch), channel


def run_simulation(config, rates, record=False):
    """Simulate until the stop condition and summarize the run.

    :param config: The run configuration.
    :type config: :class:`SimConfig`
    :param rates: Normalized sleep rates, one per source.
    :param record: Keep every delivery in :attr:`SimReport.log`.
    :returns: :class:`SimReport`
    """
    size = config.fleet.size
    peaks = [[] for _ in range(size)]
    gaps = [[] for _ in range(size)]
    wins = np.zeros(size, dtype=np.int64)
    tx_time = np.zeros(size)
    tx_sq = np.zeros(size)
    tx_cross = np.zeros(size)
    len_sq = 0.0
    measured_cycles = 0
    measured_time = 0.0
    log = []
    channel = None

    for batch, counted, channel in _batches(config, rates):
        if record:
            done = np.flatnonzero(batch.success)
            log.append((batch.winner[done], batch.end[done],
                        batch.service[done], batch.peak[done],
                        counted[done]))
        if not counted.any():
            continue
        lengths = (batch.end - batch.start)[counted]
        busy_time = batch.participants[counted] * \
            batch.service[counted][:, None]
        measured_cycles += int(np.count_nonzero(counted))
        measured_time += math.fsum(lengths)
        len_sq += float(lengths @ lengths)
        tx_time += busy_time.sum(axis=0)
        tx_sq += (busy_time * busy_time).sum(axis=0)
        tx_cross += lengths @ busy_time
        delivered = counted & batch.success
        for l in range(size):
            mine = delivered & (batch.winner == l)
            wins[l] += np.count_nonzero(mine)
            peaks[l].append(batch.peak[mine])
            gaps[l].append(batch.gap[mine])

    sources = []
    for l in range(size):
        p = np.concatenate(peaks[l]) if peaks[l] else np.empty(0)
        g = np.concatenate(gaps[l]) if gaps[l] else np.empty(0)
        n = p.size
        fraction = tx_time[l] / measured_time if measured_time else math.nan
        if measured_time:
            # Delta-method standard error of the ratio estimator.
            resid = max(0.0, tx_sq[l] - 2 * fraction * tx_cross[l] +
                        fraction * fraction * len_sq)
            stderr = math.sqrt(resid) / measured_time
        else:
            stderr = math.nan
        sources.append(SourceReport(
            deliveries=n,
            peak_age_mean=math.fsum(p) / n if n else math.nan,
            peak_age_samples_stddev=float(np.std(p, ddof=1)) if n > 1
            else math.nan,
            empirical_access_prob=(wins[l] / measured_cycles
                                   if measured_cycles else math.nan),
            empirical_transmit_fraction=fraction,
            transmit_fraction_stderr=stderr,
            mean_inter_departure=math.fsum(g) / n if n else math.nan,
            mean_cycles_between_successes=(measured_cycles / wins[l]
                                           if wins[l] else math.inf),
        ))

    weights = config.fleet.weights
    report = SimReport(
        per_source=tuple(sources),
        cycles=channel.cycles,
        collisions=channel.collisions,
        weighted_avg_peak_age=math.fsum(
            w * s.peak_age_mean for w, s in zip(weights, sources)),
        total_time=channel.now,
        busy_wakeups=channel.busy_wakeups,
        measured_cycles=measured_cycles,
        measured_time=measured_time,
        log=DeliveryLog(*(np.concatenate(parts) for parts in zip(*log)))
        if record and log else None,
    )
    LOG.debug('simulated %d cycles (%d collisions) over %.6g s',
              report.cycles, report.collisions, report.total_time)
    return report


def sampled_stream(config, rates):
    """Yield the sampled discrete-time chain of the run.

    The first item is the initial state with no event. After that, every
    cycle produces an :class:`AccessStart` when its transmission (or
    collision) starts and a :class:`DeliveryEnd` or :class:`CollisionEnd`
    when it ends. Ages are taken at the sampling instant, after a delivery
    has reset the age of its source.
    """
    size = config.fleet.size
    generation = np.zeros(size)
    index = 0
    yield SampledState(np.zeros(size), np.zeros(size, dtype=np.int8),
                       index), None

    for batch, counted, _channel in _batches(config, rates):
        for c in range(len(batch)):
            joined = np.flatnonzero(batch.participants[c])
            source = int(batch.winner[c])
            t = float(batch.tx_start[c])
            modes = np.zeros(size, dtype=np.int8)
            modes[joined] = 1
            index += 1
            yield (SampledState(t - generation, modes, index),
                   AccessStart(source, tuple(int(j) for j in joined), t))

            t = float(batch.end[c])
            if batch.success[c]:
                generation[source] = batch.tx_start[c]
                event = DeliveryEnd(source, float(batch.service[c]),
                                    float(batch.peak[c]), t,
                                    bool(counted[c]))
            else:
                event = CollisionEnd(tuple(int(j) for j in joined), t)
            index += 1
            yield (SampledState(t - generation,
                                np.zeros(size, dtype=np.int8), index),
                   event)


def energy_audit(report, fleet, batteries, rel_tolerance=1e-9):
    """Compare the simulated power draw of each source with its budget.

    :param report: A completed :class:`SimReport`.
    :param fleet: The simulated fleet.
    :param batteries: One :class:`~sleepwake.model.BatterySpec` per source.
    :param rel_tolerance: Relative slack allowed on ``P_max``.
    """
    if not report.measured_cycles or not report.measured_time > 0:
        raise EmptyRunError('cannot audit a run without measured cycles')
    batteries = list(batteries)
    if not (len(batteries) == len(report.per_source) == fleet.size):
        raise DomainError('audit needs one battery per source: %d batteries, '
                          '%d simulated sources, %d fleet sources' %
                          (len(batteries), len(report.per_source),
                           fleet.size))
    actual, budget, met, lifetime = [], [], [], []
    for spec, source in zip(batteries, report.per_source):
        fraction = source.empirical_transmit_fraction
        power = fraction * spec.avg_tx_power
        actual.append(power)
        budget.append(spec.max_power)
        met.append(bool(power <= spec.max_power * (1.0 + rel_tolerance)))
        drain = (power + spec.sleep_power * (1.0 - fraction) -
                 spec.replenish_rate)
        lifetime.append(spec.initial_energy / drain if drain > 0
                        else math.inf)
    return AuditResult(tuple(actual), tuple(budget), tuple(met),
                       tuple(lifetime))
