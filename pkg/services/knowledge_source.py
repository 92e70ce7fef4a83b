"""Источник знаний: офлайн-индекс корпуса твитов и сбор пула по ключевым словам"""
import asyncio
import heapq
import json
import pickle
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple

from pydantic import ValidationError as PydanticValidationError

from config import settings
from services.text_pipeline import strip_urls, tokenize
from storage.files import PathLike, atomic_write_bytes
from storage.models import KeywordSet, KnowledgePool, Tweet
from utils.errors import StorageError, ValidationError
from utils.logger import setup_logger
from utils.validators import canonical_username

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

INDEX_CACHE_FORMAT = "eicv-corpus-index"
INDEX_CACHE_VERSION = 1


class CorpusIndex:
    """Инвертированный индекс корпуса; после построения не изменяется"""

    def __init__(
        self,
        documents: Optional[Dict[str, Tweet]] = None,
        skipped: int = 0,
        source: Optional[Dict[str, Any]] = None,
    ):
        self.documents: Dict[str, Tweet] = documents or {}
        self.postings: Dict[str, Set[str]] = {}
        self.by_user: Dict[str, List[str]] = {}
        # Число пропущенных некорректных строк при построении
        self.skipped = skipped
        # Отпечаток файла корпуса, по которому построен индекс
        self.source = source
        self._build()

    def _build(self) -> None:
        for tweet_id, tweet in self.documents.items():
            for token in set(tokenize(strip_urls(tweet.text))):
                self.postings.setdefault(token, set()).add(tweet_id)
            if tweet.author:
                self.by_user.setdefault(canonical_username(tweet.author), []).append(tweet_id)
        for ids in self.by_user.values():
            ids.sort(key=self.recency_key, reverse=True)

    def recency_key(self, tweet_id: str) -> Tuple[int, str]:
        return self.documents[tweet_id].timestamp or 0, tweet_id

    def popularity_key(self, tweet_id: str) -> Tuple[int, int, str]:
        tweet = self.documents[tweet_id]
        return tweet.popularity or 0, tweet.timestamp or 0, tweet_id

    def __len__(self) -> int:
        return len(self.documents)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorpusIndex):
            return NotImplemented
        return (
            self.documents == other.documents
            and self.postings == other.postings
            and self.by_user == other.by_user
        )

    def matching(self, keyword: str) -> Set[str]:
        return self.postings.get(keyword.lower(), set())


# ---------------------------------------------------------------------------
# Построение индекса и кэш
# ---------------------------------------------------------------------------

def parse_corpus_line(line: str) -> Tweet:
    """Одна строка corpus.jsonl -> Tweet; ts/pop по умолчанию 0"""
    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("corpus line is not a JSON object")
    if "id" not in record or "text" not in record:
        raise ValueError("corpus line lacks 'id' or 'text'")
    record.setdefault("ts", 0)
    record.setdefault("pop", 0)
    record["id"] = str(record["id"])
    return Tweet.model_validate(record)


def corpus_fingerprint(jsonl_path: PathLike) -> Dict[str, Any]:
    """Отпечаток файла корпуса: абсолютный путь, размер и mtime_ns (для отсутствующего файла - только путь)"""
    path = Path(jsonl_path).resolve()
    try:
        stat = path.stat()
    except OSError:
        return {"path": str(path)}
    return {"path": str(path), "size": stat.st_size, "mtime_ns": stat.st_mtime_ns}


def index_corpus(jsonl_path: PathLike) -> CorpusIndex:
    """Построить индекс из JSONL-файла; некорректные строки (в том числе не UTF-8) пропускаются и считаются"""
    documents: Dict[str, Tweet] = {}
    skipped = 0
    source = corpus_fingerprint(jsonl_path)
    try:
        with open(jsonl_path, "rb") as f:
            for lineno, raw in enumerate(f, start=1):
                try:
                    line = raw.decode("utf-8")
                    if not line.strip():
                        continue
                    tweet = parse_corpus_line(line)
                except (ValueError, PydanticValidationError) as e:
                    # UnicodeDecodeError и json.JSONDecodeError - подклассы ValueError
                    skipped += 1
                    logger.debug(f"{jsonl_path}:{lineno}: некорректная строка пропущена ({e})")
                    continue
                if tweet.id in documents:
                    logger.warning(f"{jsonl_path}:{lineno}: повторный id '{tweet.id}', берётся последняя строка")
                documents[tweet.id] = tweet
    except OSError as e:
        raise StorageError(f"cannot read corpus {jsonl_path}: {e}") from e

    if skipped:
        logger.warning(f"Пропущено некорректных строк в {jsonl_path}: {skipped}")
    index = CorpusIndex(documents, skipped=skipped, source=source)
    logger.info(f"Проиндексировано документов: {len(index)}, различных токенов: {len(index.postings)}")
    return index


def save_index_cache(index: CorpusIndex, path: PathLike) -> None:
    payload = {
        "format": INDEX_CACHE_FORMAT,
        "version": INDEX_CACHE_VERSION,
        "source": index.source,
        "documents": [tweet.model_dump() for tweet in index.documents.values()],
        "skipped": index.skipped,
    }
    atomic_write_bytes(path, pickle.dumps(payload, protocol=pickle.HIGHEST_PROTOCOL))


def load_index_cache(path: PathLike, corpus_path: Optional[PathLike] = None) -> Optional[CorpusIndex]:
    """
    Загрузить кэш индекса

    None, если файла нет, формат/версия не совпадают, содержимое повреждено или
    (при заданном corpus_path) кэш построен по другому файлу корпуса либо по
    другой его версии.
    """
    try:
        with open(path, "rb") as f:
            payload = pickle.load(f)
    except FileNotFoundError:
        return None
    except (OSError, pickle.UnpicklingError, EOFError, AttributeError, ImportError, IndexError) as e:
        logger.warning(f"Кэш индекса {path} не читается ({e}), переиндексация")
        return None

    if not isinstance(payload, dict) or payload.get("format") != INDEX_CACHE_FORMAT \
            or payload.get("version") != INDEX_CACHE_VERSION:
        logger.warning(f"Кэш индекса {path} в неподдерживаемом формате, переиндексация")
        return None

    source = payload.get("source")
    if corpus_path is not None and not _same_corpus(source, corpus_fingerprint(corpus_path)):
        logger.info(f"Кэш индекса {path} построен не по текущему {corpus_path}, переиндексация")
        return None

    try:
        documents = {}
        for record in payload["documents"]:
            tweet = Tweet.model_validate(record)
            documents[tweet.id] = tweet
        skipped = int(payload.get("skipped", 0))
    except (KeyError, TypeError, ValueError, PydanticValidationError) as e:
        logger.warning(f"Кэш индекса {path} повреждён ({type(e).__name__}: {e}), переиндексация")
        return None
    return CorpusIndex(documents, skipped=skipped, source=source)


def _same_corpus(cached: Any, current: Dict[str, Any]) -> bool:
    if not isinstance(cached, dict) or cached.get("path") != current["path"]:
        return False
    # Корпус удалён: кэш того же пути остаётся единственным источником
    if "size" not in current:
        return True
    return cached.get("size") == current["size"] and cached.get("mtime_ns") == current["mtime_ns"]


def load_or_build_index(corpus_path: PathLike, cache_path: Optional[PathLike] = None) -> CorpusIndex:
    """Взять кэш, если он построен по этому корпусу, иначе проиндексировать корпус"""
    if cache_path is not None and Path(cache_path).is_file():
        index = load_index_cache(cache_path, corpus_path)
        if index is not None:
            logger.debug(f"Загружен кэш индекса {cache_path} ({len(index)} документов)")
            return index
    return index_corpus(corpus_path)



# ---------------------------------------------------------------------------
# Поиск
# ---------------------------------------------------------------------------

def search_popular(index: CorpusIndex, keyword: str, cap: int = 20) -> List[Tweet]:
    """Твиты с ключевым словом: популярность по убыванию (затем время, id), не более cap"""
    if cap <= 0:
        return []
    ids = heapq.nlargest(cap, index.matching(keyword), key=index.popularity_key)
    return [index.documents[i] for i in ids]


def search_recent(index: CorpusIndex, keyword: str, cap: int = 100) -> List[Tweet]:
    """Твиты с ключевым словом: время по убыванию (затем id), не более cap"""
    if cap <= 0:
        return []
    ids = heapq.nlargest(cap, index.matching(keyword), key=index.recency_key)
    return [index.documents[i] for i in ids]


class SearchBackend(ABC):
    """Интерфейс источника знаний (офлайн-индекс или живой API)"""

    @abstractmethod
    async def search_popular(self, keyword: str, cap: int) -> List[Tweet]:
        ...

    @abstractmethod
    async def search_recent(self, keyword: str, cap: int) -> List[Tweet]:
        ...

    @abstractmethod
    async def last_tweet(self, username: str) -> Optional[Tweet]:
        ...


class OfflineSearchBackend(SearchBackend):
    """SearchBackend поверх CorpusIndex"""

    def __init__(self, index: CorpusIndex):
        self.index = index

    async def search_popular(self, keyword: str, cap: int) -> List[Tweet]:
        return search_popular(self.index, keyword, cap)

    async def search_recent(self, keyword: str, cap: int) -> List[Tweet]:
        return search_recent(self.index, keyword, cap)

    async def last_tweet(self, username: str) -> Optional[Tweet]:
        ids = self.index.by_user.get(canonical_username(username))
        if not ids:
            return None
        return self.index.documents[ids[0]]


# ---------------------------------------------------------------------------
# Сбор знаний
# ---------------------------------------------------------------------------

async def gather(
    backend: SearchBackend,
    keywords: KeywordSet,
    popular_cap: int = 20,
    recent_cap: int = 100,
    max_concurrency: Optional[int] = None,
) -> KnowledgePool:
    """
    Запросить популярные и свежие твиты по каждому ключевому слову и объединить

    Ошибка по одному слову записывается в errors пула, остальные слова
    запрашиваются. Твиты пула упорядочены по id.
    """
    semaphore = asyncio.Semaphore(max_concurrency or settings.MAX_CONCURRENT_QUERIES)

    async def query(keyword: str) -> Tuple[List[Tweet], List[Tweet]]:
        async with semaphore:
            popular = await backend.search_popular(keyword, popular_cap)
            recent = await backend.search_recent(keyword, recent_cap)
            return popular, recent

    words = list(keywords.keywords)
    results = await asyncio.gather(*(query(word) for word in words), return_exceptions=True)

    pool = KnowledgePool()
    collected: Dict[str, Tweet] = {}
    for word, result in zip(words, results):
        if isinstance(result, BaseException):
            if not isinstance(result, Exception):
                raise result
            logger.warning(f"Запрос к источнику знаний по '{word}' не удался: {result}")
            pool.errors[word] = str(result) or type(result).__name__
            continue
        popular, recent = result
        pool.per_keyword_counts[word] = (len(popular), len(recent))
        for tweet in (*popular, *recent):
            collected.setdefault(_pool_key(tweet), tweet)

    pool.tweets = [collected[key] for key in sorted(collected)]
    logger.debug(f"Собрано твитов: {pool.size} по ключевым словам: {len(words)}")
    return pool


def _pool_key(tweet: Tweet) -> str:
    # Твит без id (живой API без идентификатора) дедуплицируется по тексту
    return tweet.id if tweet.id is not None else f"text:{tweet.text}"


async def last_tweet(backend: SearchBackend, username: str) -> Optional[Tweet]:
    """Последний твит пользователя или None"""
    if not canonical_username(username):
        raise ValidationError("username must not be empty")
    return await backend.last_tweet(username)

