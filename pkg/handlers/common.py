"""Общие помощники обработчиков: загрузка лексиконов, источник знаний, вывод"""
import json
from pathlib import Path
from typing import Any

from config import Settings, settings as app_settings
from services.knowledge_source import OfflineSearchBackend, SearchBackend, load_or_build_index
from services.lexicon_store import load_catalog, load_redundant_words, save_catalog
from storage.models import RedundantWordStore, TopicCatalog
from utils.errors import ConfigError
from utils.logger import setup_logger

logger = setup_logger(__name__, app_settings.LOG_LEVEL, app_settings.DEBUG)


def load_lexicons(settings: Settings) -> TopicCatalog:
    return load_catalog(
        settings.TOPICS_PATH, settings.TAGS_DIR, settings.WHITELIST_PATH, settings.REJECTED_PATH
    )


def save_lexicons(catalog: TopicCatalog, settings: Settings) -> None:
    save_catalog(
        catalog, settings.TOPICS_PATH, settings.TAGS_DIR, settings.WHITELIST_PATH, settings.REJECTED_PATH
    )


def load_store(settings: Settings) -> RedundantWordStore:
    return load_redundant_words(settings.REDWORD_PATH)


def open_backend(settings: Settings) -> SearchBackend:
    """
    Источник знаний по настройке KNOWLEDGE_BACKEND

    offline - индекс корпуса (кэш INDEX_CACHE_PATH, если он свежий);
    live - HTTP API с токеном KNOWLEDGE_API_TOKEN.
    """
    backend = settings.KNOWLEDGE_BACKEND.strip().lower()
    if backend == "offline":
        cache = settings.INDEX_CACHE_PATH if Path(settings.INDEX_CACHE_PATH).is_file() else None
        return OfflineSearchBackend(load_or_build_index(settings.CORPUS_PATH, cache))
    if backend == "live":
        from services.twitter_client import TwitterSearchBackend
        logger.info(f"Источник знаний: HTTP API {settings.KNOWLEDGE_API_URL}")
        return TwitterSearchBackend(settings.KNOWLEDGE_API_URL, settings.KNOWLEDGE_API_TOKEN)
    raise ConfigError(f"unknown knowledge backend '{settings.KNOWLEDGE_BACKEND}' (expected offline or live)")


async def close_quietly(resource: Any) -> None:
    """Закрыть HTTP-клиент живого адаптера, если он есть"""
    close = getattr(resource, "close", None)
    if close is not None:
        await close()


def emit(text: str) -> None:
    if text:
        print(text)


def emit_json(payload: Any) -> None:
    # sort_keys не используется: порядок тем задаёт каталог
    print(json.dumps(payload, ensure_ascii=False))
