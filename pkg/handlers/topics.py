"""Подкоманда topics: add / remove / list"""
import argparse
from pathlib import Path

from config import Settings, settings as app_settings
from handlers.common import emit, emit_json, load_lexicons, save_lexicons
from services.lexicon_store import add_topic, remove_topic
from storage.models import TopicCatalog
from utils.logger import setup_logger
from utils.templates import format_topic_list
from utils.validators import canonicalize, topic_filename

logger = setup_logger(__name__, app_settings.LOG_LEVEL, app_settings.DEBUG)


def register(subparsers) -> None:
    parser = subparsers.add_parser("topics", help="manage advertisement topics")
    actions = parser.add_subparsers(dest="action", required=True)

    add = actions.add_parser("add", help="add a topic with an empty tag set")
    add.add_argument("name")
    remove = actions.add_parser("remove", help="remove a topic and its tags")
    remove.add_argument("name")
    listing = actions.add_parser("list", help="list topics with tag counts")
    listing.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    if args.action == "add":
        # Первая тема создаёт каталог с нуля
        if Path(settings.TOPICS_PATH).is_file():
            catalog = load_lexicons(settings)
        else:
            logger.info(f"Файл тем {settings.TOPICS_PATH} не найден, создаётся новый каталог")
            catalog = TopicCatalog()
        catalog = add_topic(catalog, args.name)
        save_lexicons(catalog, settings)
        emit(f"added topic '{canonicalize(args.name)}'")
        return 0

    catalog = load_lexicons(settings)
    if args.action == "remove":
        name = canonicalize(args.name)
        catalog = remove_topic(catalog, name)
        save_lexicons(catalog, settings)
        Path(settings.TAGS_DIR, topic_filename(name)).unlink(missing_ok=True)
        emit(f"removed topic '{name}'")
        return 0

    if args.json:
        emit_json([{"topic": topic, "tags": len(catalog.tags_of(topic))} for topic in catalog.topics])
    else:
        emit(format_topic_list(catalog))
    return 0
