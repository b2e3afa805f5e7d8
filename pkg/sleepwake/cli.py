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

"""Command line experiment runner.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical or
domain errors.
"""

import argparse
import concurrent.futures
import contextlib
import functools
import logging
import math
import os
import sys

from . import config as config_mod
from . import exception
from . import output
from . import scenarios

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

MAX_WORKERS_ENV = 'SLEEPWAKE_MAX_WORKERS'

COMMANDS = {
    'solve': ('solve',),
    'simulate': ('simulate',),
    'learn': ('learn',),
    'sweep': ('sweep_ts_ratio', 'sweep_m', 'sweep_efficiency',
              'sweep_lifetime'),
    'compare': ('compare_baselines',),
    'oracle': ('oracle',),
}

REMEDIATION = (
    (exception.NoRoot, 'sum(b) < 1 puts the fleet in the energy-scarce '
     'regime; plan() selects the energy-scarce solution automatically'),
    (exception.UnboundedRates, 'set fleet.ts_ratio > 0; without a sensing '
     'time the energy-adequate rates are unbounded'),
    (exception.WrongRegime, 'let plan() choose the regime from sum(b)'),
    (exception.OverflowDomainError, 'lower the rates or ts_ratio so that '
     'sum(r) x ts_ratio stays below 700'),
    (exception.UnsupportedProblem, 'the grid oracle handles at most three '
     'sources'),
)


def worker_count(requested, environ=None):
    """Number of worker processes, capped by ``SLEEPWAKE_MAX_WORKERS``."""
    environ = os.environ if environ is None else environ
    workers = 1 if requested is None else requested
    if workers < 1:
        raise exception.ConfigError('--jobs must be at least 1, got %d' %
                                    workers)
    cap = environ.get(MAX_WORKERS_ENV)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            raise exception.ConfigError('%s must be an integer, got %r' %
                                        (MAX_WORKERS_ENV, cap)) from None
        if cap < 1:
            raise exception.ConfigError('%s must be at least 1' %
                                        MAX_WORKERS_ENV)
        workers = min(workers, cap)
    return workers


@contextlib.contextmanager
def _open_output(path, stdout):
    if path is None or path == '-':
        yield stdout
        return
    with open(path, 'w', encoding='utf-8', newline='') as f:
        yield f


def _results(scenario, config, items, workers):
    run_item = functools.partial(scenario.run_item, config)
    if workers == 1 or len(items) < 2:
        yield from map(run_item, items)
        return
    with concurrent.futures.ProcessPoolExecutor(
            max_workers=min(workers, len(items))) as executor:
        # map() keeps the order of the items whatever finishes first.
        yield from executor.map(run_item, items)


def execute(command, config_path, out=None, seeds=None, jobs=None,
            trace=None, stdout=None):
    """Run the experiment in ``config_path``.

    :raises SleepwakeError: on any failure; see :func:`run`.
    """
    stdout = sys.stdout if stdout is None else stdout
    config = config_mod.load_config(config_path)
    expected = COMMANDS[command]
    if config.scenario not in expected:
        raise exception.ConfigError(
            'the %s command runs %s scenarios, the config has %r' %
            (command, ' or '.join(expected), config.scenario))
    scenario = scenarios.load(config.scenario)
    scenario.check(config)
    workers = worker_count(jobs)
    if seeds is not None and seeds < 1:
        raise exception.ConfigError('--seeds must be at least 1, got %d' %
                                    seeds)
    seeds = config.seeds(seeds)
    if len(seeds) > 1 and not scenario.replicates:
        LOG.warning('%s does not use seeds; ignoring %d of them, '
                    'set run.instances to replicate over fleets',
                    config.scenario, len(seeds))
    items = scenario.work_items(config, seeds)
    LOG.info('%s: %d work items on %d worker(s)', config.scenario,
             len(items), workers)

    with _open_output(out or config.output, stdout) as stream:
        writer = output.TableWriter(stream, scenario.columns)
        for rows in _results(scenario, config, items, workers):
            writer.write_all(rows)

    if trace:
        with _open_output(trace, stdout) as stream:
            scenario.trace(config, seeds[0], stream)
    LOG.info('%s finished', config.scenario)


def _report(err, stderr):
    print('error: %s' % err, file=stderr)
    for kind, hint in REMEDIATION:
        if isinstance(err, kind):
            print('hint: %s' % hint, file=stderr)
            break


def run(command, config_path, stderr=None, **kwargs):
    """Run an experiment and return the exit code."""
    stderr = sys.stderr if stderr is None else stderr
    try:
        execute(command, config_path, **kwargs)
    except exception.ConfigError as err:
        _report(err, stderr)
        return EXIT_CONFIG
    except exception.SleepwakeError as err:
        _report(err, stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def validate(config_path, stdout=None, stderr=None):
    """Check a configuration without running it and print diagnostics."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        config = config_mod.load_config(config_path)
        notes = list(scenarios.load(config.scenario).check(config))
        lines = config_mod.describe(config)
    except exception.ConfigError as err:
        _report(err, stderr)
        return EXIT_CONFIG
    except exception.SleepwakeError as err:
        _report(err, stderr)
        return EXIT_DOMAIN

    for key, value in lines:
        print('%s: %s' % (key, output.format_value(value)), file=stdout)
    values = dict(lines)
    if values['regime'] == 'energy_scarce':
        note = ('energy-scarce regime: sum(b) = %s < 1, the channel idles '
                'part of the time' % output.format_value(
                    values['sum_efficiency']))
        LOG.warning(note)
        notes.append(note)
    elif math.isclose(values['sum_efficiency'], 1.0, rel_tol=1e-9):
        notes.append('sum(b) is at the regime boundary')
    for note in notes:
        print('note: %s' % note, file=stdout)
    print('ok', file=stdout)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog='sleepwake',
        description='Sleep-wake scheduling experiments for low age of '
                    'information.',
    )
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log progress')
    parser.add_argument('--debug', action='store_true',
                        help='log solver and episode details')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True,
                        help='JSON experiment file')
    common.add_argument('--out', default=None,
                        help='CSV output path, "-" for stdout (default: the '
                             'config output key, else stdout)')
    common.add_argument('--seeds', type=int, default=None,
                        help='number of replications (overrides run.seeds)')
    common.add_argument('--jobs', type=int, default=None,
                        help='worker processes, capped by $%s' %
                             MAX_WORKERS_ENV)
    common.add_argument('--trace', default=None, metavar='PATH',
                        help='also write the tab-separated trace of the '
                             'first seed to PATH')
    for name in COMMANDS:
        commands.add_parser(name, parents=[common],
                            help='run a %s experiment' % name)

    validate_parser = commands.add_parser(
        'validate', help='check a configuration without running it')
    validate_parser.add_argument('--config', required=True,
                                 help='JSON experiment file')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    if args.command == 'validate':
        return validate(args.config)
    return run(args.command, args.config, out=args.out, seeds=args.seeds,
               jobs=args.jobs, trace=args.trace)


if __name__ == '__main__':
    sys.exit(main())
