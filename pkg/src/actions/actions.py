#!/usr/bin/env python3
# Copyright 2026 The choquard-nondegeneracy Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import argparse
import json
import logging
import os
import sys
from traceback import format_exc

SRC_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Load the library from src/lib
sys.path.append(os.path.join(SRC_DIR, 'lib'))

import yaml  # noqa: E402

import choquard.exceptions as exceptions  # noqa: E402
import choquard.spectral as spectral  # noqa: E402
import choquard.suite as suite  # noqa: E402

log = logging.getLogger('choquard.actions')

ACTIONS_FILE = os.path.join(SRC_DIR, 'actions.yaml')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

# command line flag -> config.yaml option
FLAG_OPTIONS = (
    ('alphas', 'alphas'),
    ('max_degree', 'max-degree'),
    ('quad_level', 'quad-level'),
    ('tol', 'tol'),
    ('seed', 'seed'),
    ('out', 'out'),
    ('jobs', 'jobs'),
    ('log_level', 'log-level'),
)


def _write_output(text, path):
    if path:
        with open(path, 'w') as f:
            f.write(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


def _run_checks(cfg, subset):
    report = suite.run_suite(cfg, subset)
    _write_output(report.to_json(), cfg.output_path)
    return report.exit_code


def suite_action(cfg, opts):
    """Run every check and write the report."""
    return _run_checks(cfg, 'suite')


def identities_action(cfg, opts):
    return _run_checks(cfg, 'identities')


def funk_hecke_action(cfg, opts):
    return _run_checks(cfg, 'funk-hecke')


def spectrum_action(cfg, opts):
    """Print spectral tables and kernel reports, failing unless every
    kernel is three-dimensional."""
    entries = []
    for alpha in cfg.alphas:
        table = spectral.spectral_table(alpha, cfg.max_degree)
        report = spectral.kernel_report(
            alpha, cfg.max_degree, cfg.tolerance('kernel'), cfg.quad_level)
        entries.append({'table': table.as_dict(),
                        'kernel': report.as_dict()})
    _write_output(json.dumps(entries, indent=2) + '\n', cfg.output_path)
    if all(e['kernel']['unit_multiplicity'] == 3 for e in entries):
        return 0
    return 1


def csv_action(cfg, opts):
    """Write the curve named by --csv."""
    if opts.csv not in suite.CURVES:
        raise exceptions.ConfigError(
            "Invalid suite option (--csv must be one of {})".format(
                ', '.join(suite.CURVES)))
    suite.emit_csv(opts.csv, cfg)
    return 0


# Actions to function mapping, to allow for illegal python action names that
# can map to a python function.
ACTIONS = {
    "suite": suite_action,
    "spectrum": spectrum_action,
    "identities": identities_action,
    "funk-hecke": funk_hecke_action,
    "csv": csv_action,
}


def load_action_specs(path=ACTIONS_FILE):
    with open(path) as f:
        return yaml.safe_load(f)


def load_action_descriptions(path=ACTIONS_FILE):
    return {name: ' '.join(spec['description'].split())
            for name, spec in load_action_specs(path).items()}


def _add_action_params(parser, spec):
    # each declared property becomes a --<name> flag
    required = spec.get('required', [])
    for param, details in spec.get('properties', {}).items():
        parser.add_argument('--' + param, required=param in required,
                            help=' '.join(details['description'].split()))


def build_parser():
    specs = load_action_specs()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--alpha', dest='alphas',
                        help='exponents, e.g. "0.5,1.0,1.5"')
    common.add_argument('--max-degree', type=int)
    common.add_argument('--quad-level', type=int)
    common.add_argument('--tol', help='overrides, e.g. "kernel=1e-15"')
    common.add_argument('--seed', type=int)
    common.add_argument('--out', help='report or CSV path')
    common.add_argument('--jobs', type=int)
    common.add_argument('--log-level')
    parser = argparse.ArgumentParser(
        prog='choquard-verify',
        description='Numerical verification of bubble nondegeneracy.')
    subparsers = parser.add_subparsers(dest='action', metavar='ACTION')
    subparsers.required = True
    for name in ACTIONS:
        spec = specs[name]
        description = ' '.join(spec['description'].split())
        action_parser = subparsers.add_parser(
            name, parents=[common], help=description,
            description=description)
        _add_action_params(action_parser, spec)
    return parser


def options_from_args(opts):
    """Merge command line flags over the config.yaml defaults."""
    options = suite.load_defaults()
    for attr, option in FLAG_OPTIONS:
        value = getattr(opts, attr)
        if value is not None:
            options[option] = value
    return options


def configure_logging(level):
    level = str(level).upper()
    if level not in LOG_LEVELS:
        raise exceptions.ConfigError(
            "Invalid suite option (log-level {!r})".format(level))
    logging.basicConfig(
        level=getattr(logging, level),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(args):
    opts = build_parser().parse_args(args[1:])
    options = options_from_args(opts)
    try:
        configure_logging(options.get('log-level', 'WARNING'))
        cfg = suite.SuiteConfig.from_options(options)
    except exceptions.ConfigError as e:
        sys.stderr.write("{}\n".format(e))
        return 2
    action = ACTIONS[opts.action]
    try:
        return action(cfg, opts)
    except exceptions.ConfigError as e:
        sys.stderr.write("{}\n".format(e))
        return 2
    except exceptions.ChoquardError as e:
        log.error(str(e))
        sys.stderr.write("{}\n".format(e))
        return 1
    except OSError as e:
        sys.stderr.write("{}\n".format(e))
        return 2
    except Exception:
        exc = format_exc()
        log.error(exc)
        sys.stderr.write("{}\n".format(exc.splitlines()[-1]))
        return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
