"""Подкоманда redwords: list / add"""
import argparse

from config import Settings
from handlers.common import emit, emit_json, load_store
from services.text_pipeline import learn_redundant
from utils.validators import canonicalize


def register(subparsers) -> None:
    parser = subparsers.add_parser("redwords", help="maintain the redundant word list")
    actions = parser.add_subparsers(dest="action", required=True)
    listing = actions.add_parser("list", help="print redundant words")
    listing.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    add = actions.add_parser("add", help="add redundant words")
    add.add_argument("words", nargs="+")
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    store = load_store(settings)
    if args.action == "list":
        words = sorted(store.words)
        if args.json:
            emit_json(words)
        else:
            emit("\n".join(words))
        return 0

    words = [canonicalize(word) for word in args.words]
    _, added = learn_redundant(store, words, settings.REDWORD_PATH)
    emit(f"added {added} redundant word(s)")
    return 0
