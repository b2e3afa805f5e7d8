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

"""Result writers.

Every file starts with one ``#`` comment line per column describing it,
followed by a header row. Reals are written with 17 significant digits so
that they read back to the same double.
"""

import csv
import enum
import numbers

import numpy as np

from . import learner

EVENT_COLUMNS = (
    ('time_s', 'simulation time of the event, seconds'),
    ('event_kind', 'access_start, delivery_end or collision_end'),
    ('source_id', 'source of the event; participants joined by ";" for '
     'collisions'),
    ('service_time_s', 'transmission time of a delivery, seconds'),
    ('peak_s', 'peak age recorded by a delivery, seconds'),
)

LEARN_TRACE_COLUMNS = (
    ('n', 'sampled step, from 1'),
    ('episode_k', 'episode index k, the episode starts at step 2**k'),
    ('theta_hat_s', 'estimate of the mean transmission time, seconds'),
    ('cumulative_cost', 'sum of weight x peak age over deliveries, seconds'),
    ('regret', 'cumulative_cost - n x oracle cost per step'),
    ('xi_s', 'confidence radius of theta_hat, seconds'),
)


def format_value(value):
    if value is None:
        return ''
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return format(float(value), '.17g')
    if isinstance(value, (list, tuple, np.ndarray)):
        return ';'.join(format_value(v) for v in value)
    return str(value)


class TableWriter:
    """Serializes documented rows to a text stream.

    :param stream: Writable text stream.
    :param columns: ``(name, description)`` pairs.
    :param delimiter: ``','`` for CSV, ``'\\t'`` for traces.
    """

    def __init__(self, stream, columns, delimiter=','):
        self._names = [name for name, _ in columns]
        for name, description in columns:
            stream.write('# %s: %s\n' % (name, description))
        self._writer = csv.writer(stream, delimiter=delimiter,
                                  lineterminator='\n')
        self._writer.writerow(self._names)

    def write(self, row):
        """Write one row given as a dict; missing columns stay empty."""
        unknown = set(row) - set(self._names)
        if unknown:
            raise KeyError('unknown column(s) %s' % ', '.join(sorted(unknown)))
        self._writer.writerow([format_value(row.get(n)) for n in self._names])

    def write_all(self, rows):
        for row in rows:
            self.write(row)


def event_rows(stream):
    """Rows of the event trace for a :func:`sampled_stream` iterator."""
    for _state, event in stream:
        if event is None:
            continue
        row = {'time_s': event.time, 'event_kind': event.kind}
        if event.kind == 'collision_end':
            row['source_id'] = event.participants
        else:
            row['source_id'] = event.source
        if event.kind == 'delivery_end':
            row['service_time_s'] = event.service_time
            row['peak_s'] = event.peak
        yield row


def learn_trace_rows(trace):
    """Rows of the learner trace, one per sampled step."""
    regret = trace.regret
    for i, n in enumerate(trace.steps):
        yield {
            'n': int(n),
            'episode_k': learner.episode_index(n),
            'theta_hat_s': trace.theta[i],
            'cumulative_cost': trace.cumulative_cost[i],
            'regret': None if regret is None else regret[i],
            'xi_s': trace.confidence[i],
        }
