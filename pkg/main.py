"""Точка входа CLI: разбор аргументов, настройки, коды завершения"""
import argparse
import asyncio
import sys
from typing import List, Optional

from config import load_settings, settings
from handlers import classify, evaluate, index, redwords, tags, topics
from utils.errors import EICVError, UsageError
from utils.logger import configure_all, setup_logger

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

COMMANDS = (topics, tags, redwords, classify, index, evaluate)

EXIT_IO = 2
EXIT_INTERRUPTED = 130


class CliParser(argparse.ArgumentParser):
    """ArgumentParser, который не завершает процесс при ошибке разбора"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="eicv",
        description="Mine advertisement interest topics from tweets with the EICV method.",
    )
    parser.add_argument("--config", help="'key = value' settings file")
    parser.add_argument("--topics", help="topics file (overrides TOPICS_PATH)")
    parser.add_argument("--tags-dir", help="per-topic tag directory (overrides TAGS_DIR)")
    parser.add_argument("--corpus", help="corpus JSONL file (overrides CORPUS_PATH)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (overrides LOG_LEVEL)")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Разобрать аргументы, выполнить подкоманду и вернуть код завершения"""
    try:
        args = build_parser().parse_args(argv)
        app_settings = load_settings(
            args.config,
            TOPICS_PATH=args.topics,
            TAGS_DIR=args.tags_dir,
            CORPUS_PATH=args.corpus,
            LOG_LEVEL=args.log_level,
        )
        configure_all(app_settings.LOG_LEVEL, app_settings.DEBUG, app_settings.LOG_FILE)
        logger.debug(f"Запуск '{args.command}' с {vars(args)}")
        return asyncio.run(args.handler(args, app_settings))
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return e.exit_code
    except EICVError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.debug(f"{type(e).__name__} (код выхода {e.exit_code})", exc_info=True)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
