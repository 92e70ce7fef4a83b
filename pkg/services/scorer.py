"""Скоринг тем: ранжирование слов, набор сущностей, значения пересечения и выбор тем"""
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from config import settings
from services.knowledge_source import SearchBackend, gather, last_tweet
from services.text_pipeline import KeywordExtractor, keywords_of, strip_urls, tokenize
from storage.models import (
    ClassificationResult, Diagnostics, EntitySet, KnowledgePool, RankedWords,
    RedundantWordStore, ScoreConfig, TagSet, TopicCatalog, Tweet,
)
from utils.errors import ClassificationError, TweetNotFoundError, ValidationError
from utils.logger import setup_logger

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)


def rank_words(pool: KnowledgePool, store: RedundantWordStore) -> RankedWords:
    """Частоты слов всех твитов пула без избыточных слов, по убыванию частоты"""
    counts: Counter = Counter()
    for tweet in pool.tweets:
        counts.update(token for token in tokenize(strip_urls(tweet.text)) if token not in store.words)
    entries = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return RankedWords(entries=entries)


def build_entity_set(ranked: RankedWords, cfg: ScoreConfig) -> EntitySet:
    """Набор сущностей: слова с частотой >= min_freq, не более entity_cap, в порядке ранжирования"""
    words = [word for word, freq in ranked.entries if freq >= cfg.min_freq]
    return EntitySet(words=words[:cfg.entity_cap])


def intersect_value(entity: EntitySet, tagset: TagSet) -> int:
    """
    Значение темы = |сущности ∩ теги темы|

    Тег-слово совпадает, если оно есть среди сущностей; тег-фраза - если среди них все её слова.
    Каждый тег даёт не больше 1.
    """
    words = set(entity.words)
    return sum(1 for tag in tagset.tags if all(part in words for part in tag.split()))


def generate_topics(
    values: Mapping[str, int],
    cfg: ScoreConfig,
) -> Tuple[int, Fraction, List[str]]:
    """
    Выбрать темы по порогу t_v = num * t_max / den и минимальному значению

    Сравнение value > t_v выполняется в целых числах (value * den > num * t_max).
    Порядок: значение по убыванию, затем порядок тем во входном словаре (каталоге).

    Returns:
        (t_max, t_v, matched)
    """
    if not values:
        return 0, Fraction(0), []

    t_max = max(values.values())
    t_v = Fraction(cfg.threshold_num * t_max, cfg.threshold_den)
    if t_max <= cfg.minimum_value:
        return t_max, t_v, []

    order = {topic: i for i, topic in enumerate(values)}
    matched = [
        topic for topic, value in values.items()
        if value * cfg.threshold_den > cfg.threshold_num * t_max
    ]
    matched.sort(key=lambda topic: (-values[topic], order[topic]))
    return t_max, t_v, matched


async def classify(
    tweet: Tweet,
    catalog: TopicCatalog,
    backend: SearchBackend,
    store: RedundantWordStore,
    cfg: Optional[ScoreConfig] = None,
    extractor: Optional[KeywordExtractor] = None,
    max_concurrency: Optional[int] = None,
) -> ClassificationResult:
    """
    Полный конвейер классификации одного твита

    keywords_of -> gather -> rank_words -> build_entity_set -> intersect_value -> generate_topics
    """
    cfg = cfg or settings.score_config
    if not catalog.topics:
        raise ValidationError("catalog has no topics")

    keyword_set = keywords_of(tweet, store, cfg.keyword_min_len, extractor)
    diagnostics = Diagnostics(
        text=tweet.text,
        keywords=list(keyword_set.keywords),
        discarded_candidates=list(keyword_set.discarded_candidates),
    )
    zero_values: Dict[str, int] = {topic: 0 for topic in catalog.topics}

    if keyword_set.is_empty:
        diagnostics.reason = "empty_keywords"
        return ClassificationResult(values=zero_values, diagnostics=diagnostics)

    pool = await gather(backend, keyword_set, cfg.popular_cap, cfg.recent_cap, max_concurrency)
    diagnostics.pool_size = pool.size
    diagnostics.per_keyword_counts = dict(pool.per_keyword_counts)
    diagnostics.errors = dict(pool.errors)

    entity = build_entity_set(rank_words(pool, store), cfg)
    if not entity.words:
        diagnostics.reason = "empty_entities"
        result = ClassificationResult(values=zero_values, entity_set=entity, diagnostics=diagnostics)
    else:
        values = {topic: intersect_value(entity, catalog.tagsets[topic]) for topic in catalog.topics}
        t_max, t_v, matched = generate_topics(values, cfg)
        result = ClassificationResult(
            values=values, t_max=t_max, t_v=t_v, matched=matched,
            entity_set=entity, diagnostics=diagnostics,
        )

    if pool.errors:
        failed = ", ".join(sorted(pool.errors))
        raise ClassificationError(f"knowledge source failed for keyword(s): {failed}", partial=result)

    logger.info(f"Классифицирован '{tweet.text[:40]}': matched={result.matched} t_max={result.t_max}")
    return result


async def classify_user(
    username: str,
    catalog: TopicCatalog,
    backend: SearchBackend,
    store: RedundantWordStore,
    cfg: Optional[ScoreConfig] = None,
    extractor: Optional[KeywordExtractor] = None,
    max_concurrency: Optional[int] = None,
) -> ClassificationResult:
    """Классифицировать последний твит пользователя"""
    tweet = await last_tweet(backend, username)
    if tweet is None:
        raise TweetNotFoundError(f"no tweet found for user '{username}'")
    if not tweet.text.strip():
        diagnostics = Diagnostics(text=tweet.text, reason="empty_keywords")
        return ClassificationResult(values={t: 0 for t in catalog.topics}, diagnostics=diagnostics)
    return await classify(tweet, catalog, backend, store, cfg, extractor, max_concurrency)
