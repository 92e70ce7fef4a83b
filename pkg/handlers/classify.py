"""Подкоманда classify: темы интересов твита или последнего твита пользователя"""
import argparse

from config import Settings, settings as app_settings
from handlers.common import close_quietly, emit, load_lexicons, load_store, open_backend
from services.scorer import classify, classify_user
from services.text_pipeline import learn_redundant
from storage.models import ClassificationResult, Tweet
from utils.errors import ClassificationError
from utils.logger import setup_logger
from utils.templates import format_classification, format_classification_details

logger = setup_logger(__name__, app_settings.LOG_LEVEL, app_settings.DEBUG)


def register(subparsers) -> None:
    parser = subparsers.add_parser("classify", help="match a tweet against the topic catalog")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--text", help="tweet text")
    source.add_argument("--user", help="classify the user's latest tweet")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    parser.add_argument("--learn", action="store_true",
                        help="add this run's discarded keyword candidates to the redundant word list")
    parser.add_argument("--verbose", action="store_true", help="print keywords, entities and values")
    parser.set_defaults(handler=handle)


def _print_result(result: ClassificationResult, args: argparse.Namespace) -> None:
    if args.json:
        emit(result.to_json())
        return
    emit(format_classification(result))
    if args.verbose:
        emit(format_classification_details(result))


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    catalog = load_lexicons(settings)
    store = load_store(settings)
    cfg = settings.score_config
    backend = open_backend(settings)
    try:
        if args.user is not None:
            result = await classify_user(
                args.user, catalog, backend, store, cfg, max_concurrency=settings.MAX_CONCURRENT_QUERIES
            )
        else:
            result = await classify(
                Tweet(text=args.text), catalog, backend, store, cfg, max_concurrency=settings.MAX_CONCURRENT_QUERIES
            )
    except ClassificationError as e:
        if e.partial is not None:
            _print_result(e.partial, args)
        raise
    finally:
        await close_quietly(backend)

    _print_result(result, args)
    if args.learn:
        _, learned = learn_redundant(store, result.diagnostics.discarded_candidates, settings.REDWORD_PATH)
        logger.info(f"Из этого прогона добавлено избыточных слов: {learned}")
    return 0
