"""Command-line entry point.

Settings come from dataclass defaults, then per-command defaults, then an
optional ``--config`` file of ``key = value`` lines, then flags (flags win).

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical failure.
"""

import argparse
import dataclasses
import sys

from .errors import (ConfigError, CorruptHeader, DegenerateRegion, DimensionTooSmall, IoFailure,
                     NonFinite, RdlseError, StabilityViolation, UnsupportedFormat)
from .experiments import COMMANDS, RunSpec, build_spec, coerce, dump_config, parse_config_text, run

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


def _parser():
    p = argparse.ArgumentParser(prog="rdlse", description="Reaction-diffusion level set experiments")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--dump-config", action="store_true",
                   help="print the resolved settings and exit without running")
    group = p.add_argument_group("settings")
    for f in dataclasses.fields(RunSpec):
        if f.name != "command":
            group.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None, metavar="V")
    return p


def resolve(argv):
    args = _parser().parse_args(argv)
    file_values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = parse_config_text(fh.read())
        except OSError as exc:
            raise IoFailure(f"cannot read config {args.config}: {exc}") from exc
    overrides = {f.name: coerce(f.name, getattr(args, f.name))
                 for f in dataclasses.fields(RunSpec)
                 if f.name != "command" and getattr(args, f.name) is not None}
    return args, build_spec(args.command, file_values, overrides)


def main(argv=None):
    try:
        args, spec = resolve(sys.argv[1:] if argv is None else argv)
        if args.dump_config:
            sys.stdout.write(dump_config(spec))
            return EXIT_OK
        summary = run(spec)
    except (ConfigError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IoFailure, UnsupportedFormat, CorruptHeader, DimensionTooSmall, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NonFinite, DegenerateRegion, StabilityViolation, RdlseError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for k, v in summary.items():
        print(f"{k}={v}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
