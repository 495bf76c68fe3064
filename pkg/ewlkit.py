import sys

from core_data_modules.logging import Logger

from src.cli.arguments import build_parser
from src.cli.commands import run

log = Logger(__name__)

if __name__ == "__main__":
    args = build_parser().parse_args()

    log.info(f"Running the {args.command} command")
    exit_code = run(args)
    if exit_code != 0:
        log.warning(f"{args.command} exited with code {exit_code}")
    sys.exit(exit_code)
