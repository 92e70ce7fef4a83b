"""Подкоманда eval: точность на размеченном датасете"""
import argparse

from config import Settings
from handlers.common import close_quietly, emit, emit_json, load_lexicons, load_store, open_backend
from services.evaluator import check_gold_topics, evaluate, load_dataset, load_groups
from utils.templates import format_eval_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate accuracy on a labeled dataset")
    parser.add_argument("--dataset", required=True, help="CSV of 'kind,input,gold' rows")
    parser.add_argument("--groups", help="topic groups CSV (default: GROUPS_PATH)")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    dataset = load_dataset(args.dataset)
    groups = load_groups(args.groups or settings.GROUPS_PATH)
    catalog = load_lexicons(settings)
    check_gold_topics(dataset, catalog)
    store = load_store(settings)
    backend = open_backend(settings)
    try:
        report = await evaluate(
            dataset, catalog, backend, store, settings.score_config, groups, settings.MAX_CONCURRENT_QUERIES
        )
    finally:
        await close_quietly(backend)

    if args.json:
        emit_json(report.to_json_dict())
    else:
        emit(format_eval_report(report))
    return 0
