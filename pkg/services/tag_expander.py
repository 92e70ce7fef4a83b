"""Генерация кандидатов в теги через провайдер связанных слов"""
import asyncio
import csv
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config import settings
from services.lexicon_store import add_tags, detect_ambiguous
from storage.files import PathLike
from storage.models import ExpansionResult, TopicCatalog
from utils.errors import ProviderError, StorageError, TopicNotFoundError, ValidationError
from utils.logger import setup_logger
from utils.validators import canonicalize, validate_limit, validate_tag

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

# Кандидаты с оценкой ниже порога в разбор не попадают
DEFAULT_MIN_SCORE = 0.1


class RelatedWordsProvider(ABC):
    """Источник связанных слов: related(term, limit) -> [(слово, оценка 0..1)]"""

    @abstractmethod
    async def related(self, term: str, limit: int) -> List[Tuple[str, float]]:
        """Не более limit пар, оценки не возрастают"""
        ...


class RelatedWordsTable(RelatedWordsProvider):
    """Офлайн-таблица связанных слов из TSV `term<TAB>related_term<TAB>score`"""

    def __init__(self, entries: Optional[Dict[str, List[Tuple[str, float]]]] = None):
        self.entries: Dict[str, List[Tuple[str, float]]] = {}
        for term, pairs in (entries or {}).items():
            # Устойчивая сортировка: при равных оценках сохраняется порядок файла
            self.entries[canonicalize(term)] = sorted(pairs, key=lambda pair: -pair[1])

    @classmethod
    def from_tsv(cls, path: PathLike) -> "RelatedWordsTable":
        entries: Dict[str, List[Tuple[str, float]]] = {}
        skipped = 0
        try:
            with open(path, "r", encoding="utf-8", newline="") as f:
                for row in csv.reader(f, delimiter="\t"):
                    if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                        continue
                    try:
                        term, related, raw_score = (field.strip() for field in row[:3])
                        score = float(raw_score)
                    except ValueError:
                        skipped += 1
                        continue
                    if not 0.0 <= score <= 1.0:
                        skipped += 1
                        continue
                    entries.setdefault(canonicalize(term), []).append((related, score))
        except (OSError, UnicodeDecodeError) as e:
            raise StorageError(f"cannot read related-words table {path}: {e}") from e
        if skipped:
            logger.warning(f"Пропущено некорректных строк в {path}: {skipped}")
        return cls(entries)

    async def related(self, term: str, limit: int) -> List[Tuple[str, float]]:
        return list(self.entries.get(canonicalize(term), [])[:limit])


async def expand_topic(
    catalog: TopicCatalog,
    topic: str,
    provider: RelatedWordsProvider,
    limit: int,
    min_score: float = DEFAULT_MIN_SCORE,
) -> List[str]:
    """
    Кандидаты в теги для темы (в каталог не записываются)

    Из ответа провайдера убираются слабые (score < min_score), некорректные,
    уже имеющиеся у темы и ранее отклонённые тренером теги. Порядок сохраняется.
    """
    name = canonicalize(topic)
    if not catalog.has_topic(name):
        raise TopicNotFoundError(f"topic '{name}' not found")
    ok, error = validate_limit(limit)
    if not ok:
        raise ValidationError(error)

    try:
        pairs = await provider.related(name, limit)
    except ProviderError as e:
        raise ProviderError(f"topic '{name}': {e}", topic=name) from e
    except Exception as e:
        raise ProviderError(f"topic '{name}': {type(e).__name__}: {e}", topic=name) from e

    existing = catalog.tags_of(name)
    candidates: List[str] = []
    for word, score in pairs[:limit]:
        if score < min_score:
            continue
        tag = canonicalize(word)
        if not validate_tag(tag)[0]:
            continue
        if tag in existing or (tag, name) in catalog.rejected or tag in candidates:
            continue
        candidates.append(tag)
    return candidates


async def expand_all(
    catalog: TopicCatalog,
    provider: RelatedWordsProvider,
    limit: int,
    min_score: float = DEFAULT_MIN_SCORE,
    max_concurrency: Optional[int] = None,
) -> ExpansionResult:
    """
    Кандидаты для всех тем и отчёт о неоднозначности, который получился бы после их записи

    Ошибка провайдера по одной теме записывается в errors и не мешает остальным.
    """
    semaphore = asyncio.Semaphore(max_concurrency or settings.MAX_CONCURRENT_QUERIES)

    async def expand(topic: str) -> List[str]:
        async with semaphore:
            return await expand_topic(catalog, topic, provider, limit, min_score)

    results = await asyncio.gather(*(expand(topic) for topic in catalog.topics), return_exceptions=True)

    expansion = ExpansionResult()
    hypothetical = catalog
    for topic, result in zip(catalog.topics, results):
        if isinstance(result, BaseException):
            if not isinstance(result, Exception):
                raise result
            logger.warning(f"Генерация тегов для '{topic}' не удалась: {result}")
            expansion.errors[topic] = str(result)
            continue
        expansion.candidates[topic] = result
        hypothetical, _ = add_tags(hypothetical, topic, result)

    expansion.report = detect_ambiguous(hypothetical)
    logger.info(
        f"Генерация тегов: тем {len(expansion.candidates)}, ошибок {len(expansion.errors)}, "
        f"неоднозначных тегов {len(expansion.report.entries)}"
    )
    return expansion


def load_provider(table_path: PathLike) -> RelatedWordsProvider:
    """Офлайн-таблица, если файл есть; иначе живой datamuse-совместимый клиент"""
    if Path(table_path).is_file():
        return RelatedWordsTable.from_tsv(table_path)
    from services.related_words_client import DatamuseProvider
    logger.warning(f"Таблица связанных слов {table_path} не найдена, используется провайдер {settings.PROVIDER_URL}")
    return DatamuseProvider(settings.PROVIDER_URL, settings.PROVIDER_TIMEOUT_MS)
