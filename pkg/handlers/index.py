"""Подкоманда index: построить кэш индекса корпуса"""
import argparse

from config import Settings
from handlers.common import emit, emit_json
from services.knowledge_source import index_corpus, save_index_cache


def register(subparsers) -> None:
    parser = subparsers.add_parser("index", help="index the tweet corpus and write the cache")
    parser.add_argument("--corpus", default=argparse.SUPPRESS, help="corpus JSONL file")
    parser.add_argument("--out", help="index cache file (default: INDEX_CACHE_PATH)")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    corpus = args.corpus or settings.CORPUS_PATH
    out = args.out or settings.INDEX_CACHE_PATH
    index = index_corpus(corpus)
    save_index_cache(index, out)
    if args.json:
        emit_json({"documents": len(index), "tokens": len(index.postings), "skipped": index.skipped, "cache": out})
    else:
        emit(f"indexed {len(index)} document(s), {len(index.postings)} token(s); "
             f"{index.skipped} malformed line(s) skipped; cache written to {out}")
    return 0
