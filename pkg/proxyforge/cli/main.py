"""Main CLI entry point for proxyforge"""

import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import Callable, Dict, List, Optional

from ..core.errors import ArtifactMissing, InvalidConfig, ProxyForgeError, UnknownProblem
from .commands import cmd_baseline, cmd_discover, cmd_ela, cmd_gen_proxies, cmd_validate, layout_for
from .config import DEFAULTS_FILE, PipelineConfig, apply_cli, load_from_yaml
from .report import cmd_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

COMMANDS: Dict[str, Callable[[PipelineConfig], Path]] = {
    "ela": cmd_ela,
    "gen-proxies": cmd_gen_proxies,
    "discover": cmd_discover,
    "validate": cmd_validate,
    "baseline": cmd_baseline,
}


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="proxyforge",
        description="Discover optimization algorithms on landscape-matched proxy functions",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML configuration file")
    common.add_argument("--seed", type=int, help="Master seed")
    common.add_argument("--problem", help="Target problem name (e.g. mini-bragg, synthetic:sphere:5)")
    common.add_argument(
        "--condition",
        choices=["proxy-driven", "benchmark-driven", "real-world-direct"],
        help="Discovery condition",
    )
    common.add_argument("--with-baselines", action="store_true", help="Also validate RS, DE and LSHADE")
    common.add_argument("--out", type=Path, help="Output root directory")
    common.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    sub.add_parser("ela", parents=[common], help="Characterize the target landscape")
    sub.add_parser("gen-proxies", parents=[common], help="Evolve proxy functions")
    sub.add_parser("discover", parents=[common], help="Search algorithm configurations")
    sub.add_parser("validate", parents=[common], help="Validate champions on the target")
    sub.add_parser("baseline", parents=[common], help="Run RS, DE and LSHADE on the target")
    report = sub.add_parser("report", parents=[common], help="Aggregate run records into tables")
    report.add_argument("run_dir", nargs="?", type=Path, help="Directory to aggregate (default: --out)")
    return parser


def close_logging() -> None:
    root = logging.getLogger("proxyforge")
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()


def configure_logging(verbose: bool, log_file: Optional[Path] = None) -> None:
    """Console handler on stderr and an optional timestamped file handler"""
    close_logging()
    root = logging.getLogger("proxyforge")
    root.setLevel(logging.DEBUG)
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.INFO if verbose else logging.WARNING)
    console.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    root.addHandler(console)
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(file_handler)


def load_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_from_yaml(args.config) if args.config else load_from_yaml(DEFAULTS_FILE)
    return apply_cli(config, args)


def _message(error: BaseException) -> str:
    # KeyError subclasses quote their str()
    if isinstance(error, KeyError) and error.args:
        return str(error.args[0])
    return str(error)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI"""
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if args.command == "report":
            configure_logging(args.verbose)
            cmd_report(args.run_dir or Path(config.out))
        else:
            config.validate()
            configure_logging(args.verbose, layout_for(config).log_file)
            COMMANDS[args.command](config)
    except (InvalidConfig, UnknownProblem, ArtifactMissing) as e:
        print(f"Error: {_message(e)}", file=sys.stderr)
        return EXIT_USAGE
    except ProxyForgeError as e:
        print(f"Error: {_message(e)}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception:
        print(f"Error running {args.command}:", file=sys.stderr)
        traceback.print_exc()
        return EXIT_RUNTIME
    finally:
        close_logging()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
