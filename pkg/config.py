"""Конфигурация приложения"""
from pathlib import Path
from typing import Any, Dict, Optional
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

from storage.models import ScoreConfig
from utils.errors import ConfigError

load_dotenv()


class Settings(BaseSettings):
    """Настройки приложения"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Лексиконы
    TOPICS_PATH: str = "data/topics.csv"
    TAGS_DIR: str = "data/tags"
    REDWORD_PATH: str = "data/redword.csv"
    WHITELIST_PATH: str = "data/whitelist.csv"
    REJECTED_PATH: str = "data/rejected.csv"
    PENDING_DIR: str = "data/pending"

    # Источник знаний
    CORPUS_PATH: str = "data/corpus.jsonl"
    INDEX_CACHE_PATH: str = "data/corpus.idx"

    # Генерация тегов
    RELATED_WORDS_PATH: str = "data/related_words.tsv"
    EXPAND_LIMIT: int = 100
    EXPAND_MIN_SCORE: float = 0.1

    # Оценка
    GROUPS_PATH: str = "data/groups.csv"

    # Скоринг (EICV)
    MIN_FREQ: int = 3
    ENTITY_CAP: int = 20
    THRESHOLD_NUM: int = 3
    THRESHOLD_DEN: int = 4
    MINIMUM_VALUE: int = 3
    SEARCH_POPULAR_CAP: int = 20
    SEARCH_RECENT_CAP: int = 100
    KEYWORDS_MIN_LEN: int = 3

    # Параллельные запросы к источнику знаний / провайдеру
    MAX_CONCURRENT_QUERIES: int = 8

    # "offline" - индекс корпуса, "live" - HTTP API
    KNOWLEDGE_BACKEND: str = "offline"

    # Живые адаптеры (HTTP)
    PROVIDER_URL: str = "https://api.datamuse.com/words"
    PROVIDER_TIMEOUT_MS: int = 5000
    KNOWLEDGE_API_URL: str = "https://api.twitter.com/1.1"
    KNOWLEDGE_API_TOKEN: str = ""

    # Settings
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"
    # Пустая строка - логирование в файл выключено
    LOG_FILE: str = ""

    @property
    def score_config(self) -> ScoreConfig:
        """Собрать и провалидировать ScoreConfig"""
        try:
            return ScoreConfig(
                min_freq=self.MIN_FREQ,
                entity_cap=self.ENTITY_CAP,
                threshold_num=self.THRESHOLD_NUM,
                threshold_den=self.THRESHOLD_DEN,
                minimum_value=self.MINIMUM_VALUE,
                popular_cap=self.SEARCH_POPULAR_CAP,
                recent_cap=self.SEARCH_RECENT_CAP,
                keyword_min_len=self.KEYWORDS_MIN_LEN,
            )
        except PydanticValidationError as e:
            raise ConfigError(f"invalid scoring configuration: {e.errors()[0]['msg']}") from e


def parse_config_file(path: str) -> Dict[str, str]:
    """
    Прочитать конфиг из строк `key = value`

    Ключи с точкой (`search.popular_cap`) приводятся к имени поля настроек
    (`SEARCH_POPULAR_CAP`).
    """
    config_path = Path(path)
    try:
        lines = config_path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e

    values: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        field = key.strip().replace(".", "_").upper()
        if field not in Settings.model_fields:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key.strip()}'")
        values[field] = value.strip()
    return values


def load_settings(config_path: Optional[str] = None, **overrides: Any) -> Settings:
    """Загрузить настройки: окружение, затем файл конфига, затем явные переопределения"""
    values: Dict[str, Any] = {}
    if config_path:
        values.update(parse_config_file(config_path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        loaded = Settings(**values)
    except PydanticValidationError as e:
        raise ConfigError(f"invalid configuration: {e.errors()[0]['msg']}") from e
    # Инварианты скоринга проверяются при разборе, а не при первом классифицировании
    _ = loaded.score_config
    return loaded


settings = Settings()
