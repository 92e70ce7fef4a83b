"""Шаблоны вывода команд"""
from typing import Dict, List

from storage.models import AmbiguityReport, ClassificationResult, EvalReport, TopicCatalog

NO_TOPIC_MATCHED = "No topic matched"
NO_AMBIGUITY = "no ambiguity"


def format_topic_list(catalog: TopicCatalog) -> str:
    """Темы с количеством тегов, по одной на строку"""
    lines = []
    for topic in catalog.topics:
        count = len(catalog.tags_of(topic))
        lines.append(f"{topic}\t{count} tag{'s' if count != 1 else ''}")
    return "\n".join(lines)


def format_classification(result: ClassificationResult) -> str:
    if not result.matched:
        return NO_TOPIC_MATCHED
    return "\n".join(result.matched)


def format_classification_details(result: ClassificationResult) -> str:
    """Подробности для --verbose: ключевые слова, сущности, значения тем"""
    lines = [
        f"keywords: {', '.join(result.diagnostics.keywords) or '-'}",
        f"pool size: {result.diagnostics.pool_size}",
        f"entities: {', '.join(result.entity_set.words) or '-'}",
    ]
    lines += [f"  {topic}: {value}" for topic, value in result.values.items()]
    lines.append(f"t_max = {result.t_max}, t_v = {float(result.t_v):g}")
    return "\n".join(lines)


def format_ambiguity_report(report: AmbiguityReport) -> str:
    if report.is_empty:
        return NO_AMBIGUITY
    return "\n".join(f"{entry.tag}: {', '.join(entry.topics)}" for entry in report.entries)


def format_ambiguity_by_topic(report: AmbiguityReport, catalog: TopicCatalog) -> str:
    """Список неоднозначных тегов для каждой темы"""
    if report.is_empty:
        return NO_AMBIGUITY
    grouped = report.by_topic()
    lines = []
    for topic in catalog.topics:
        if topic in grouped:
            lines.append(f"{topic}: {', '.join(grouped[topic])}")
    return "\n".join(lines)


def format_candidates(candidates: Dict[str, List[str]]) -> str:
    lines = []
    for topic, tags in candidates.items():
        lines.append(f"{topic} ({len(tags)} candidate{'s' if len(tags) != 1 else ''}):")
        lines += [f"  {tag}" for tag in tags]
    return "\n".join(lines)


def format_eval_report(report: EvalReport) -> str:
    """Сводка `correct/total = XX.XX%` и список ошибок"""
    lines = [report.summary_line(), f"error rate: {report.error_rate_percent}%"]
    for outcome in report.per_case:
        if outcome.verdict.correct:
            continue
        matched = ", ".join(outcome.matched) or NO_TOPIC_MATCHED
        lines.append(f"FAIL [{outcome.case.kind}] {outcome.case.input!r} -> {matched}: {outcome.verdict.reason}")
    return "\n".join(lines)


TRIAGE_PROMPT = "[k]eep, [r]emove everywhere, remove [f]rom topics, [w]hitelist, [q]uit: "
TRIAGE_TOPICS_PROMPT = "remove from (comma-separated topics): "
