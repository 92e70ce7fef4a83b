"""Сервис лексиконов: темы, теги, избыточные слова, белый список и разбор неоднозначностей"""
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Tuple

from config import settings
from storage.files import PathLike, atomic_write_csv, read_csv_fields, read_csv_rows
from storage.models import (
    AmbiguityDecision, AmbiguityEntry, AmbiguityReport, DecisionAction,
    RedundantWordStore, TagSet, TopicCatalog,
)
from utils.errors import CatalogLoadError, DuplicateTopicError, StorageError, TopicNotFoundError, ValidationError
from utils.logger import setup_logger
from utils.validators import canonicalize, topic_filename, validate_tag, validate_topic_name

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)


# ---------------------------------------------------------------------------
# Загрузка
# ---------------------------------------------------------------------------

def read_tag_file(path: PathLike) -> Tuple[Set[str], int]:
    """
    Прочитать файл тегов темы

    Returns:
        (канонические теги, число пропущенных некорректных полей)
    """
    tags: Set[str] = set()
    skipped = 0
    for field in read_csv_fields(path):
        tag = canonicalize(field)
        ok, error = validate_tag(tag)
        if not ok:
            logger.debug(f"Пропущен некорректный тег в {path}: {error}")
            skipped += 1
            continue
        tags.add(tag)
    return tags, skipped


def load_catalog(
    topics_path: PathLike,
    tags_dir: PathLike,
    whitelist_path: Optional[PathLike] = None,
    rejected_path: Optional[PathLike] = None,
) -> TopicCatalog:
    """Загрузить каталог тем и тегов из CSV-файлов (порядок тем сохраняется)"""
    topics_file = Path(topics_path)
    if not topics_file.is_file():
        raise CatalogLoadError(f"topics file not found: {topics_file}")

    try:
        rows = read_csv_rows(topics_file, skip_comments=True)
    except (OSError, UnicodeDecodeError) as e:
        raise CatalogLoadError(f"cannot read topics file {topics_file}: {e}") from e

    catalog = TopicCatalog()
    for field in (field for row in rows for field in row):
        topic = canonicalize(field)
        ok, error = validate_topic_name(topic)
        if not ok:
            logger.warning(f"Пропущена тема в {topics_file}: {error}")
            continue
        if catalog.has_topic(topic):
            logger.warning(f"Повторная тема '{topic}' в {topics_file} пропущена")
            continue
        catalog.topics.append(topic)
        catalog.tagsets[topic] = TagSet(topic=topic)

    skipped_total = 0
    for topic in catalog.topics:
        tag_file = Path(tags_dir) / topic_filename(topic)
        if not tag_file.is_file():
            raise CatalogLoadError(f"tag file for topic '{topic}' not found: {tag_file}", topic=topic)
        try:
            tags, skipped = read_tag_file(tag_file)
        except (OSError, UnicodeDecodeError) as e:
            raise CatalogLoadError(f"cannot read tag file for topic '{topic}': {e}", topic=topic) from e
        catalog.tagsets[topic].tags = tags
        skipped_total += skipped

    if skipped_total:
        logger.warning(f"При загрузке {tags_dir} пропущено некорректных тегов: {skipped_total}")

    if whitelist_path is not None and Path(whitelist_path).is_file():
        for tag, topics in _read_tag_topic_rows(whitelist_path, catalog):
            if len(topics) >= 2:
                catalog.whitelist.add((tag, frozenset(topics)))
    if rejected_path is not None and Path(rejected_path).is_file():
        for tag, topics in _read_tag_topic_rows(rejected_path, catalog):
            catalog.rejected.update((tag, topic) for topic in topics)

    logger.info(f"Каталог загружен: тем {len(catalog.topics)}, тегов {catalog.tag_count()}")
    return catalog


def _read_tag_topic_rows(path: PathLike, catalog: TopicCatalog) -> List[Tuple[str, List[str]]]:
    """Строки вида `tag,topic1,topic2,...`; ссылки на неизвестные темы отбрасываются"""
    result = []
    for row in read_csv_rows(path):
        tag = canonicalize(row[0])
        topics = []
        for field in row[1:]:
            topic = canonicalize(field)
            if catalog.has_topic(topic):
                topics.append(topic)
            else:
                logger.warning(f"{path}: запись '{tag}' ссылается на неизвестную тему '{topic}'")
        if tag and topics:
            result.append((tag, topics))
    return result


# ---------------------------------------------------------------------------
# Изменение каталога
# ---------------------------------------------------------------------------

def add_topic(catalog: TopicCatalog, name: str) -> TopicCatalog:
    """Добавить тему с пустым набором тегов"""
    topic = canonicalize(name)
    ok, error = validate_topic_name(topic)
    if not ok:
        raise ValidationError(error)
    if catalog.has_topic(topic):
        raise DuplicateTopicError(f"topic '{topic}' already exists")

    updated = catalog.model_copy(deep=True)
    updated.topics.append(topic)
    updated.tagsets[topic] = TagSet(topic=topic)
    return updated


def remove_topic(catalog: TopicCatalog, name: str) -> TopicCatalog:
    """Удалить тему вместе с её тегами и записями белого списка"""
    topic = canonicalize(name)
    if not catalog.has_topic(topic):
        raise TopicNotFoundError(f"topic '{topic}' not found")

    updated = catalog.model_copy(deep=True)
    updated.topics.remove(topic)
    del updated.tagsets[topic]
    updated.whitelist = {entry for entry in updated.whitelist if topic not in entry[1]}
    updated.rejected = {entry for entry in updated.rejected if entry[1] != topic}
    return updated


def add_tags(catalog: TopicCatalog, topic: str, tags: Iterable[str]) -> Tuple[TopicCatalog, int]:
    """
    Добавить теги к теме

    Returns:
        (обновлённый каталог, число действительно новых тегов)
    """
    name = canonicalize(topic)
    if not catalog.has_topic(name):
        raise TopicNotFoundError(f"topic '{name}' not found")

    updated = catalog.model_copy(deep=True)
    existing = updated.tagsets[name].tags
    added = 0
    for raw in tags:
        tag = canonicalize(raw)
        ok, error = validate_tag(tag)
        if not ok:
            logger.warning(f"Пропущен тег темы '{name}': {error}")
            continue
        if tag not in existing:
            existing.add(tag)
            added += 1
    return updated, added


def detect_ambiguous(catalog: TopicCatalog) -> AmbiguityReport:
    """Теги, встречающиеся в двух и более темах и не одобренные в белом списке"""
    occurrences: Dict[str, List[str]] = {}
    for topic in catalog.topics:
        for tag in catalog.tagsets[topic].tags:
            occurrences.setdefault(tag, []).append(topic)

    entries = [
        AmbiguityEntry(tag=tag, topics=topics)
        for tag, topics in sorted(occurrences.items())
        if len(topics) >= 2 and (tag, frozenset(topics)) not in catalog.whitelist
    ]
    return AmbiguityReport(entries=entries)


def resolve_ambiguity(catalog: TopicCatalog, decisions: Iterable[AmbiguityDecision]) -> TopicCatalog:
    """
    Применить решения тренера к отчёту о неоднозначности

    REMOVE_* удаляют тег из тем и заносят пары (тег, тема) в журнал отклонённых;
    WHITELIST одобряет текущее множество тем тега. Если после частичного
    удаления тег остаётся в двух и более темах, оставшееся множество
    считается просмотренным и попадает в белый список.
    """
    updated = catalog.model_copy(deep=True)
    scope = {entry.tag: entry.topics for entry in detect_ambiguous(catalog).entries}

    for decision in decisions:
        tag = canonicalize(decision.tag)
        topics = scope.pop(tag, None)
        if topics is None:
            logger.warning(f"Решение по '{tag}' пропущено: тега нет в отчёте о неоднозначности")
            continue

        if decision.action == DecisionAction.WHITELIST:
            updated.whitelist.add((tag, frozenset(topics)))
            continue

        if decision.action == DecisionAction.REMOVE_EVERYWHERE:
            targets = list(topics)
        else:
            requested = [canonicalize(t) for t in decision.topics]
            for name in requested:
                if name not in topics:
                    logger.warning(f"Решение по '{tag}': в теме '{name}' нет этого тега")
            targets = [t for t in topics if t in requested]
            if not targets:
                logger.warning(f"Решение по '{tag}' пропущено: нет подходящих тем для удаления")
                scope[tag] = topics
                continue

        for topic in targets:
            updated.tagsets[topic].tags.discard(tag)
            updated.rejected.add((tag, topic))

        remaining = [t for t in topics if t not in targets]
        if len(remaining) >= 2:
            updated.whitelist.add((tag, frozenset(remaining)))

    return updated


# ---------------------------------------------------------------------------
# Сохранение
# ---------------------------------------------------------------------------

def save_catalog(
    catalog: TopicCatalog,
    topics_path: PathLike,
    tags_dir: PathLike,
    whitelist_path: Optional[PathLike] = None,
    rejected_path: Optional[PathLike] = None,
) -> None:
    """
    Сохранить каталог

    Файлы тегов пишутся первыми, файл тем - последним; каждый файл пишется
    через временный файл и атомарное переименование.
    """
    for topic in catalog.topics:
        rows = [[tag] for tag in sorted(catalog.tagsets[topic].tags)]
        atomic_write_csv(Path(tags_dir) / topic_filename(topic), rows)

    order = {topic: i for i, topic in enumerate(catalog.topics)}
    if whitelist_path is not None:
        rows = [
            [tag, *sorted(topics, key=order.__getitem__)]
            for tag, topics in sorted(catalog.whitelist, key=lambda e: (e[0], sorted(e[1])))
        ]
        atomic_write_csv(whitelist_path, rows)
    if rejected_path is not None:
        grouped: Dict[str, List[str]] = {}
        for tag, topic in catalog.rejected:
            grouped.setdefault(tag, []).append(topic)
        rows = [[tag, *sorted(topics, key=order.__getitem__)] for tag, topics in sorted(grouped.items())]
        atomic_write_csv(rejected_path, rows)

    atomic_write_csv(topics_path, [[topic] for topic in catalog.topics])
    logger.info(f"Каталог сохранён: тем {len(catalog.topics)} в {topics_path}")


# ---------------------------------------------------------------------------
# Избыточные слова (redword.csv)
# ---------------------------------------------------------------------------

def load_redundant_words(path: PathLike) -> RedundantWordStore:
    """Загрузить список избыточных слов; отсутствующий файл - пустой список"""
    if not Path(path).is_file():
        logger.warning(f"Файл избыточных слов {path} не найден, список пуст")
        return RedundantWordStore()
    try:
        fields = read_csv_fields(path)
    except (OSError, UnicodeDecodeError) as e:
        raise StorageError(f"cannot read redundant word file {path}: {e}") from e
    words = {canonicalize(field) for field in fields}
    words.discard("")
    return RedundantWordStore(words=words)


def save_redundant_words(store: RedundantWordStore, path: PathLike) -> None:
    atomic_write_csv(path, [[word] for word in sorted(store.words)])
