"""Модели предметной области"""
import json
from decimal import Decimal, ROUND_HALF_UP
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, List, Literal, Optional, Set, Tuple

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_serializer, model_validator


# ---------------------------------------------------------------------------
# Лексиконы
# ---------------------------------------------------------------------------

class TagSet(BaseModel):
    """Набор тегов одной темы"""
    topic: str
    tags: Set[str] = Field(default_factory=set)


class TopicCatalog(BaseModel):
    """Темы, их теги, белый список общих тегов и журнал отклонённых тегов"""
    topics: List[str] = Field(default_factory=list)
    tagsets: Dict[str, TagSet] = Field(default_factory=dict)
    # (тег, множество тем), одобренные как законно общие
    whitelist: Set[Tuple[str, FrozenSet[str]]] = Field(default_factory=set)
    # (тег, тема), удалённые тренером; генератор тегов их больше не предлагает
    rejected: Set[Tuple[str, str]] = Field(default_factory=set)

    def has_topic(self, topic: str) -> bool:
        return topic in self.tagsets

    def tags_of(self, topic: str) -> Set[str]:
        return self.tagsets[topic].tags

    def tag_count(self) -> int:
        return sum(len(ts.tags) for ts in self.tagsets.values())


class RedundantWordStore(BaseModel):
    """Список избыточных слов (redword.csv)"""
    words: Set[str] = Field(default_factory=set)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


class AmbiguityEntry(BaseModel):
    """Тег, встречающийся в нескольких темах"""
    tag: str
    topics: List[str]


class AmbiguityReport(BaseModel):
    """Отчёт о неоднозначных тегах (порядок: тег, затем порядок тем каталога)"""
    entries: List[AmbiguityEntry] = Field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def tags(self) -> List[str]:
        return [entry.tag for entry in self.entries]

    def by_topic(self) -> Dict[str, List[str]]:
        """Список неоднозначных тегов для каждой темы"""
        grouped: Dict[str, List[str]] = {}
        for entry in self.entries:
            for topic in entry.topics:
                grouped.setdefault(topic, []).append(entry.tag)
        return grouped


class DecisionAction(str, Enum):
    """Решения тренера по неоднозначному тегу"""
    REMOVE_FROM = "remove_from"
    REMOVE_EVERYWHERE = "remove"
    WHITELIST = "whitelist"


class AmbiguityDecision(BaseModel):
    tag: str
    action: DecisionAction
    # Только для REMOVE_FROM
    topics: List[str] = Field(default_factory=list)


class ExpansionResult(BaseModel):
    """Кандидаты в теги по темам и гипотетический отчёт о неоднозначности"""
    candidates: Dict[str, List[str]] = Field(default_factory=dict)
    errors: Dict[str, str] = Field(default_factory=dict)
    report: AmbiguityReport = Field(default_factory=AmbiguityReport)


# ---------------------------------------------------------------------------
# Твиты и ключевые слова
# ---------------------------------------------------------------------------

class Tweet(BaseModel):
    """Короткий текст с необязательными метаданными автора, времени и популярности"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    text: str
    id: Optional[str] = None
    author: Optional[str] = Field(default=None, validation_alias=AliasChoices("author", "user"))
    timestamp: Optional[int] = Field(default=None, validation_alias=AliasChoices("timestamp", "ts"))
    popularity: Optional[int] = Field(default=None, ge=0, validation_alias=AliasChoices("popularity", "pop"))


# Токены в исходном порядке, дубликаты сохраняются
TokenSet = List[str]


class KeywordSet(BaseModel):
    """Ключевые слова твита и отброшенные эвристикой кандидаты этого прогона"""
    keywords: List[str] = Field(default_factory=list)
    discarded_candidates: List[str] = Field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.keywords


class KnowledgePool(BaseModel):
    """Твиты, собранные по всем ключевым словам (без дубликатов id)"""
    tweets: List[Tweet] = Field(default_factory=list)
    # keyword -> (popular_hits, recent_hits)
    per_keyword_counts: Dict[str, Tuple[int, int]] = Field(default_factory=dict)
    errors: Dict[str, str] = Field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.tweets)


# ---------------------------------------------------------------------------
# Скоринг
# ---------------------------------------------------------------------------

class RankedWords(BaseModel):
    """Слова пула по убыванию частоты, при равенстве по алфавиту"""
    entries: List[Tuple[str, int]] = Field(default_factory=list)


class EntitySet(BaseModel):
    """Набор сущностей: частые слова из источника знаний"""
    words: List[str] = Field(default_factory=list)


class ScoreConfig(BaseModel):
    """Параметры скоринга: отсечка частоты, размер набора сущностей, порог, минимальное значение"""
    model_config = ConfigDict(frozen=True)

    min_freq: int = Field(default=3, gt=0)
    entity_cap: int = Field(default=20, gt=0)
    threshold_num: int = Field(default=3, gt=0)
    threshold_den: int = Field(default=4, gt=0)
    minimum_value: int = Field(default=3, ge=0)
    popular_cap: int = Field(default=20, ge=0)
    recent_cap: int = Field(default=100, ge=0)
    keyword_min_len: int = Field(default=3, gt=0)

    @model_validator(mode="after")
    def _threshold_below_max(self) -> "ScoreConfig":
        # t_v < t_max, иначе тема с максимальным значением не проходит порог
        if self.threshold_num >= self.threshold_den:
            raise ValueError("threshold_num must be less than threshold_den")
        return self


class Diagnostics(BaseModel):
    """Промежуточные данные классификации"""
    text: str = ""
    keywords: List[str] = Field(default_factory=list)
    discarded_candidates: List[str] = Field(default_factory=list)
    pool_size: int = 0
    per_keyword_counts: Dict[str, Tuple[int, int]] = Field(default_factory=dict)
    errors: Dict[str, str] = Field(default_factory=dict)
    # None, "empty_keywords" или "empty_entities"
    reason: Optional[str] = None


class ClassificationResult(BaseModel):
    """Значения пересечения, t_max, t_v и выбранные темы"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: Dict[str, int] = Field(default_factory=dict)
    t_max: int = 0
    t_v: Fraction = Fraction(0)
    matched: List[str] = Field(default_factory=list)
    entity_set: EntitySet = Field(default_factory=EntitySet)
    diagnostics: Diagnostics = Field(default_factory=Diagnostics)

    @field_serializer("t_v")
    def _serialize_t_v(self, value: Fraction) -> float:
        return float(value)

    def to_json_dict(self) -> dict:
        return {
            "matched": list(self.matched),
            "values": dict(self.values),
            "t_max": self.t_max,
            "t_v": float(self.t_v),
            "entities": list(self.entity_set.words),
            "diagnostics": {
                "keywords": sorted(self.diagnostics.keywords),
                "discarded": sorted(self.diagnostics.discarded_candidates),
                "pool_size": self.diagnostics.pool_size,
                "reason": self.diagnostics.reason,
                "errors": dict(sorted(self.diagnostics.errors.items())),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False)


# ---------------------------------------------------------------------------
# Оценка
# ---------------------------------------------------------------------------

class LabeledCase(BaseModel):
    """Размеченный пример: текст или имя пользователя и допустимые темы"""
    kind: Literal["text", "user"] = "text"
    input: str
    # None означает NONE: правильный ответ - "ни одна тема не подошла"
    gold_topics: Optional[FrozenSet[str]] = None

    @property
    def expects_none(self) -> bool:
        return self.gold_topics is None


class TopicGroups(BaseModel):
    """Группы родственных тем (например, игры)"""
    groups: Dict[str, Set[str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _topic_in_one_group(self) -> "TopicGroups":
        seen: Dict[str, str] = {}
        for name, topics in self.groups.items():
            for topic in topics:
                if topic in seen:
                    raise ValueError(f"topic '{topic}' is in groups '{seen[topic]}' and '{name}'")
                seen[topic] = name
        return self

    def group_of(self, topic: str) -> Optional[str]:
        for name, topics in self.groups.items():
            if topic in topics:
                return name
        return None


class Verdict(BaseModel):
    correct: bool
    reason: str = ""


class CaseOutcome(BaseModel):
    case: LabeledCase
    matched: List[str] = Field(default_factory=list)
    verdict: Verdict


class EvalReport(BaseModel):
    """Итоги оценки: точность по формуле correct * 100 / total"""
    total: int = Field(gt=0)
    correct: int = Field(ge=0)
    per_case: List[CaseOutcome] = Field(default_factory=list)

    @property
    def incorrect(self) -> int:
        return self.total - self.correct

    @property
    def accuracy_percent(self) -> str:
        return _percent(self.correct, self.total)

    @property
    def error_rate_percent(self) -> str:
        return _percent(self.incorrect, self.total)

    def summary_line(self) -> str:
        return f"{self.correct}/{self.total} = {self.accuracy_percent}%"

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "incorrect": self.incorrect,
            "accuracy_percent": self.accuracy_percent,
            "error_rate_percent": self.error_rate_percent,
            "per_case": [
                {
                    "kind": outcome.case.kind,
                    "input": outcome.case.input,
                    "gold": sorted(outcome.case.gold_topics) if outcome.case.gold_topics else "NONE",
                    "matched": outcome.matched,
                    "correct": outcome.verdict.correct,
                    "reason": outcome.verdict.reason,
                }
                for outcome in self.per_case
            ],
        }


def _percent(part: int, total: int) -> str:
    """Процент с двумя знаками, округление половины вверх, без плавающей точки"""
    value = Decimal(part * 100) / Decimal(total)
    return str(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
