"""Сервис оценки точности классификатора на размеченном датасете"""
import asyncio
import csv
from typing import Iterable, List, Optional

from pydantic import ValidationError as PydanticValidationError

from config import settings
from services.knowledge_source import SearchBackend
from services.scorer import classify, classify_user
from storage.files import PathLike, read_csv_rows
from storage.models import (
    CaseOutcome, ClassificationResult, EvalReport, LabeledCase, RedundantWordStore,
    ScoreConfig, TopicCatalog, TopicGroups, Tweet, Verdict,
)
from utils.errors import EICVError, EvaluationError, StorageError, ValidationError
from utils.logger import setup_logger
from utils.validators import canonicalize

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

NONE_LABEL = "NONE"


def load_dataset(path: PathLike) -> List[LabeledCase]:
    """eval.csv: строки `input_kind,input,gold`, gold - темы через ';' или NONE"""
    cases: List[LabeledCase] = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            for lineno, row in enumerate(csv.reader(f), start=1):
                if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                    continue
                if len(row) != 3:
                    raise ValidationError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
                kind, text, gold = (field.strip() for field in row)
                if kind not in ("text", "user"):
                    raise ValidationError(f"{path}:{lineno}: unknown input kind '{kind}'")
                cases.append(LabeledCase(kind=kind, input=text, gold_topics=parse_gold(gold)))
    except (OSError, UnicodeDecodeError) as e:
        raise StorageError(f"cannot read dataset {path}: {e}") from e
    return cases


def parse_gold(raw: str) -> Optional[frozenset]:
    if raw.strip().upper() == NONE_LABEL:
        return None
    topics = frozenset(t for t in (canonicalize(part) for part in raw.split(";")) if t)
    if not topics:
        raise ValidationError(f"empty gold label '{raw}'")
    return topics


def check_gold_topics(dataset: Iterable[LabeledCase], catalog: TopicCatalog) -> None:
    """Золотые темы датасета должны быть темами каталога"""
    unknown = sorted({
        topic
        for case in dataset
        for topic in (case.gold_topics or ())
        if not catalog.has_topic(topic)
    })
    if unknown:
        raise ValidationError(f"dataset references topic(s) not in the catalog: {', '.join(unknown)}")


def load_groups(path: Optional[PathLike]) -> TopicGroups:
    """groups.csv: строки `group_name,topic1,topic2,...`; нет файла - нет групп"""
    if path is None:
        return TopicGroups()
    try:
        rows = read_csv_rows(path, skip_comments=True)
    except FileNotFoundError:
        logger.warning(f"Файл групп {path} не найден, оценка без групп тем")
        return TopicGroups()
    except (OSError, UnicodeDecodeError) as e:
        raise StorageError(f"cannot read groups file {path}: {e}") from e
    try:
        return TopicGroups(groups={row[0]: {canonicalize(t) for t in row[1:]} for row in rows})
    except PydanticValidationError as e:
        raise ValidationError(f"{path}: {e.errors()[0]['msg']}") from e


def judge(prediction: ClassificationResult, gold: LabeledCase, groups: TopicGroups) -> Verdict:
    """
    Правило корректности

    Верно, если (a) ожидается NONE и тем нет, или (b) золотая тема на 1-м или 2-м
    месте среди выбранных и каждая выбранная тема - золотая или из одной группы
    с золотой. Иначе неверно с указанием первого нарушенного условия.
    """
    matched = prediction.matched
    if gold.expects_none:
        if not matched:
            return Verdict(correct=True, reason="no topic matched, as expected")
        return Verdict(correct=False, reason=f"expected no topic, got {', '.join(matched)}")

    gold_topics = gold.gold_topics or frozenset()
    if not any(topic in gold_topics for topic in matched[:2]):
        if not matched:
            return Verdict(correct=False, reason="no topic matched")
        return Verdict(correct=False, reason="no gold topic at rank 1 or 2")

    gold_groups = {groups.group_of(topic) for topic in gold_topics} - {None}
    for topic in matched:
        if topic in gold_topics:
            continue
        if groups.group_of(topic) not in gold_groups:
            return Verdict(correct=False, reason=f"topic '{topic}' is outside the gold topics' groups")
    return Verdict(correct=True, reason="gold topic in top 2, all topics in gold groups")


def build_report(outcomes: Iterable[CaseOutcome]) -> EvalReport:
    """Свести исходы: accuracy = correct * 100 / total"""
    per_case = list(outcomes)
    if not per_case:
        raise EvaluationError("dataset is empty, accuracy is undefined")
    correct = sum(1 for outcome in per_case if outcome.verdict.correct)
    return EvalReport(total=len(per_case), correct=correct, per_case=per_case)


async def evaluate(
    dataset: List[LabeledCase],
    catalog: TopicCatalog,
    backend: SearchBackend,
    store: RedundantWordStore,
    cfg: Optional[ScoreConfig] = None,
    groups: Optional[TopicGroups] = None,
    max_concurrency: Optional[int] = None,
) -> EvalReport:
    """
    Классифицировать и оценить каждый пример

    Ошибка классификации примера засчитывается как неверный ответ, прогон не
    прерывается. Порядок исходов совпадает с порядком датасета.
    """
    if not dataset:
        raise EvaluationError("dataset is empty, accuracy is undefined")
    groups = groups or TopicGroups()
    semaphore = asyncio.Semaphore(max_concurrency or settings.MAX_CONCURRENT_QUERIES)

    async def run_case(case: LabeledCase) -> CaseOutcome:
        async with semaphore:
            try:
                if case.kind == "user":
                    prediction = await classify_user(
                        case.input, catalog, backend, store, cfg, max_concurrency=max_concurrency
                    )
                else:
                    prediction = await classify(
                        Tweet(text=case.input), catalog, backend, store, cfg, max_concurrency=max_concurrency
                    )
            except EICVError as e:
                logger.warning(f"Пример '{case.input}' не классифицирован: {e}")
                return CaseOutcome(
                    case=case, verdict=Verdict(correct=False, reason=f"classification error: {e}")
                )
        verdict = judge(prediction, case, groups)
        return CaseOutcome(case=case, matched=prediction.matched, verdict=verdict)

    outcomes = await asyncio.gather(*(run_case(case) for case in dataset))
    report = build_report(outcomes)
    logger.info(f"Оценка: {report.summary_line()}")
    return report
