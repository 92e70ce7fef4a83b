"""Сервис обработки текста твита: URL, токены, избыточные слова, ключевые слова"""
import re
import string
from abc import ABC, abstractmethod
from typing import Iterable, Optional, Tuple

from config import settings
from services.lexicon_store import save_redundant_words
from storage.files import PathLike
from storage.models import KeywordSet, RedundantWordStore, TokenSet, Tweet
from utils.errors import ValidationError
from utils.logger import setup_logger

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

# http(s)://... и www. в любом месте строки, до ближайшего пробела
URL_PATTERN = re.compile(r"https?://\S*|www\.\S*")

# Внутренние апострофы и дефисы сохраняются, по краям снимается вся пунктуация
EDGE_PUNCTUATION = string.punctuation + "“”‘’«»…–—¡¿"


def strip_urls(text: str) -> str:
    """Удалить ссылки, остальной текст не меняется"""
    return URL_PATTERN.sub("", text)


def tokenize(text: str) -> TokenSet:
    """
    Разбить текст на сущности (entities)

    Нижний регистр, разбиение по пробелам, снятие пунктуации по краям токена
    (в том числе # и @). Удлинённые слова ("gooooaaal") не нормализуются.
    """
    tokens = []
    for raw in text.lower().split():
        token = raw.strip(EDGE_PUNCTUATION)
        if token and "://" not in token:
            tokens.append(token)
    return tokens


def remove_redundant(tokens: TokenSet, store: RedundantWordStore) -> TokenSet:
    """Токены без избыточных слов: порядок и дубликаты сохраняются"""
    return [token for token in tokens if token not in store.words]


class KeywordExtractor(ABC):
    """Точка расширения для внешнего сервиса ключевых слов"""

    @abstractmethod
    def extract(self, tokens: TokenSet) -> KeywordSet:
        ...


class HeuristicKeywordExtractor(KeywordExtractor):
    """Локальная эвристика: длина >= min_len, есть хотя бы одна буква, не число"""

    def __init__(self, min_len: int = 3):
        self.min_len = min_len

    def is_keyword(self, token: str) -> bool:
        return (
            len(token) >= self.min_len
            and any(ch.isalpha() for ch in token)
            and not token.isdigit()
        )

    def extract(self, tokens: TokenSet) -> KeywordSet:
        keywords, discarded = [], []
        seen = set()
        for token in tokens:
            if token in seen:
                continue
            seen.add(token)
            (keywords if self.is_keyword(token) else discarded).append(token)
        return KeywordSet(keywords=keywords, discarded_candidates=discarded)


def extract_keywords(tokens: TokenSet, min_len: int = 3) -> KeywordSet:
    """Ключевые слова (уникальные, в порядке появления) и отброшенные кандидаты"""
    return HeuristicKeywordExtractor(min_len).extract(tokens)


def learn_redundant(
    store: RedundantWordStore,
    discarded: Iterable[str],
    path: Optional[PathLike] = None,
) -> Tuple[RedundantWordStore, int]:
    """
    Добавить отброшенные кандидаты в список избыточных слов и сохранить в redword.csv

    При ошибке записи исходный store не меняется и ошибка пробрасывается.

    Returns:
        (новый store, число новых слов)
    """
    new_words = {word for word in discarded if word} - store.words
    if not new_words:
        return store, 0

    updated = RedundantWordStore(words=store.words | new_words)
    if path is not None:
        save_redundant_words(updated, path)
    logger.info(f"Добавлено избыточных слов: {len(new_words)}")
    return updated, len(new_words)


def keywords_of(
    tweet: Tweet,
    store: RedundantWordStore,
    min_len: int = 3,
    extractor: Optional[KeywordExtractor] = None,
) -> KeywordSet:
    """Ключевые слова твита: strip_urls -> tokenize -> remove_redundant -> extract_keywords"""
    if not tweet.text.strip():
        raise ValidationError("tweet text must not be empty")
    tokens = remove_redundant(tokenize(strip_urls(tweet.text)), store)
    extractor = extractor or HeuristicKeywordExtractor(min_len)
    result = extractor.extract(tokens)
    logger.debug(f"Ключевые слова {result.keywords}, отброшены {result.discarded_candidates}")
    return result
