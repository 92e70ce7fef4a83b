"""Общие фикстуры тестов: каталог из десяти тем, корпус, избыточные слова, конфиг CLI"""
import asyncio
import shutil
from pathlib import Path

import pytest

from services.knowledge_source import OfflineSearchBackend, SearchBackend, index_corpus
from services.lexicon_store import load_catalog, load_redundant_words
from services.tag_expander import RelatedWordsTable
from storage.models import ScoreConfig

FIXTURES = Path(__file__).parent / "fixtures"

SAMPLE_TWEETS = [
    ("I like Ronaldo", ["football"]),
    ("I like Harry Potter", ["movie"]),
    ("How good Shahrukh Khan is!!!!", ["movie"]),
    ("This time I am not going to miss pizza", ["food"]),
    ("I am frustrated", []),
    ("Sachin is my idol", ["cricket"]),
]


def run(coro):
    return asyncio.run(coro)


class TrackingBackend(SearchBackend):
    """Обёртка над источником знаний: наибольшее число одновременных запросов"""

    def __init__(self, inner):
        self.inner = inner
        self.active = 0
        self.peak = 0

    async def search_popular(self, keyword, cap):
        self.active += 1
        self.peak = max(self.peak, self.active)
        try:
            await asyncio.sleep(0.01)
            return await self.inner.search_popular(keyword, cap)
        finally:
            self.active -= 1

    async def search_recent(self, keyword, cap):
        return await self.inner.search_recent(keyword, cap)

    async def last_tweet(self, username):
        return await self.inner.last_tweet(username)


@pytest.fixture(scope="session")
def corpus_index():
    return index_corpus(FIXTURES / "corpus.jsonl")


@pytest.fixture
def backend(corpus_index):
    return OfflineSearchBackend(corpus_index)


@pytest.fixture
def catalog():
    return load_catalog(
        FIXTURES / "topics.csv", FIXTURES / "tags", FIXTURES / "whitelist.csv", FIXTURES / "rejected.csv"
    )


@pytest.fixture
def store():
    return load_redundant_words(FIXTURES / "redword.csv")


@pytest.fixture
def cfg():
    return ScoreConfig()


@pytest.fixture
def related_table():
    return RelatedWordsTable.from_tsv(FIXTURES / "related_words.tsv")


@pytest.fixture
def workspace(tmp_path):
    """Копия фикстур во временном каталоге и конфиг, указывающий на неё"""
    data = tmp_path / "data"
    shutil.copytree(FIXTURES, data)
    config = tmp_path / "eicv.conf"
    config.write_text(
        "\n".join([
            "# test workspace",
            f"topics_path = {data / 'topics.csv'}",
            f"tags_dir = {data / 'tags'}",
            f"redword_path = {data / 'redword.csv'}",
            f"whitelist_path = {data / 'whitelist.csv'}",
            f"rejected_path = {data / 'rejected.csv'}",
            f"pending_dir = {data / 'pending'}",
            f"corpus_path = {data / 'corpus.jsonl'}",
            f"index_cache_path = {data / 'corpus.idx'}",
            f"related_words_path = {data / 'related_words.tsv'}",
            f"groups_path = {data / 'groups.csv'}",
            "search.popular_cap = 20",
            "search.recent_cap = 100",
            "knowledge_backend = offline",
        ]) + "\n",
        encoding="utf-8",
    )
    return tmp_path
