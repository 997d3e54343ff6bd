"""Command-line verbs: gen-data, train, eval, simulate and check."""

import argparse
import json
import logging
import sys
from typing import Any, Sequence

import yaml

from .core.errors import ContractViolation, EnnError, PropertySuiteFailure
from .services import ANALYTIC, MODES, CheckService, PipelineService, parse_arch
from .utils.logging import setup_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONTRACT = 2
EXIT_SUITE = 3

FIRE_FLAGS = ("n_min", "f_inc", "f_dec", "alpha_start", "f_alpha", "dt_max", "pseudo_mass")


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with exit status 1 instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _arch(text: str) -> str:
    try:
        parse_arch(text)
    except ContractViolation as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML file deep-merged over the defaults")
    common.add_argument("--log-level", default=None, help="Logging level (default from ENN_LOG_LEVEL)")

    parser = _Parser(
        prog="enn-argon",
        description="Unitary-equivariant networks for Lennard-Jones Argon forces",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    gen = verbs.add_parser("gen-data", parents=[common], help="Generate a force dataset")
    gen.add_argument("--count", type=int, default=None, help="Number of configurations")
    gen.add_argument("--seed", type=int, default=None, help="Global seed")
    gen.add_argument("--out", required=True, help="Output .jsonl path")

    tr = verbs.add_parser("train", parents=[common], help="Train a network with FIRE")
    tr.add_argument("--dataset", required=True, help="Dataset .jsonl path")
    tr.add_argument("--arch", type=_arch, default=None, help="Widths, e.g. 6-50-90-100-80-50-4")
    tr.add_argument("--iterations", type=int, default=None, help="Maximum FIRE iterations")
    tr.add_argument("--dt", type=float, default=None, help="Initial FIRE time step")
    tr.add_argument("--log-interval", type=int, default=None, help="Iterations between validation losses")
    fire = tr.add_argument_group("FIRE hyperparameters", "Unset flags keep the configured values")
    fire.add_argument("--n-min", type=int, default=None, help="Downhill steps before acceleration")
    fire.add_argument("--f-inc", type=float, default=None, help="Time-step growth factor")
    fire.add_argument("--f-dec", type=float, default=None, help="Time-step shrink factor on reset")
    fire.add_argument("--alpha-start", type=float, default=None, help="Mixing after a reset")
    fire.add_argument("--f-alpha", type=float, default=None, help="Mixing decay factor")
    fire.add_argument("--dt-max", type=float, default=None, help="Largest FIRE time step")
    fire.add_argument("--pseudo-mass", type=float, default=None, help="Mass of the fictitious particle")
    tr.add_argument("--seed", type=int, default=None, help="Global seed")
    tr.add_argument("--out", required=True, help="Checkpoint .json path")

    ev = verbs.add_parser("eval", parents=[common], help="Force RMSD on a dataset split")
    ev.add_argument("--checkpoint", default=ANALYTIC, help="Checkpoint path or 'analytic'")
    ev.add_argument("--dataset", required=True, help="Dataset .jsonl path")
    ev.add_argument("--split", choices=("train", "val", "test"), default="test")
    ev.add_argument("--out", default=None, help="Scatter CSV of analytic vs predicted components")

    sim = verbs.add_parser("simulate", parents=[common], help="MD against the analytic reference")
    sim.add_argument("--checkpoint", default=ANALYTIC, help="Checkpoint path or 'analytic'")
    sim.add_argument("--samples", type=int, default=None, help="Number of velocity samples")
    sim.add_argument("--steps", type=int, default=None, help="Integration steps")
    sim.add_argument("--dt", type=float, default=None, help="Time step in fs")
    sim.add_argument("--seed", type=int, default=None, help="Global seed")
    sim.add_argument("--out", required=True, help="Prefix of the CSV outputs")

    chk = verbs.add_parser("check", parents=[common], help="Run a property suite")
    chk.add_argument("--mode", choices=MODES, default="equivariance")
    chk.add_argument("--checkpoint", default=None, help="Check a trained network instead of random ones")
    chk.add_argument("--seed", type=int, default=None, help="Global seed")
    return parser


def _dispatch(args: argparse.Namespace) -> dict[str, Any]:
    if args.verb == "check":
        return CheckService(args.config).run(args.mode, seed=args.seed, checkpoint=args.checkpoint)

    service = PipelineService(args.config)
    if args.verb == "gen-data":
        return service.gen_data(args.out, count=args.count, seed=args.seed)
    if args.verb == "train":
        return service.train(
            args.dataset,
            args.out,
            arch=args.arch,
            iterations=args.iterations,
            seed=args.seed,
            log_interval=args.log_interval,
            dt=args.dt,
            fire={key: getattr(args, key) for key in FIRE_FLAGS},
        )
    if args.verb == "eval":
        return service.evaluate(args.checkpoint, args.dataset, split=args.split, out=args.out)
    return service.simulate(
        args.out,
        checkpoint=args.checkpoint,
        samples=args.samples,
        steps=args.steps,
        dt=args.dt,
        seed=args.seed,
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one verb, print its JSON report and return the exit status."""
    args = build_parser().parse_args(argv)
    setup_logger(args.log_level)
    logger.info("enn-argon %s started", args.verb)

    try:
        report = _dispatch(args)
    except PropertySuiteFailure as exc:
        logger.error("%s", exc)
        print(json.dumps(exc.report, indent=2))
        return EXIT_SUITE
    except (EnnError, OSError, yaml.YAMLError) as exc:
        logger.error("%s failed: %s", args.verb, exc)
        return EXIT_CONTRACT

    print(json.dumps(report, indent=2))
    logger.info("enn-argon %s finished", args.verb)
    return EXIT_OK
