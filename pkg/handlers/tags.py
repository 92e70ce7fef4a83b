"""Подкоманда tags: expand / add / report / triage"""
import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional

from config import Settings, settings as app_settings
from handlers.common import close_quietly, emit, emit_json, load_lexicons, save_lexicons
from services.lexicon_store import add_tags, detect_ambiguous, resolve_ambiguity
from services.tag_expander import expand_all, expand_topic, load_provider
from storage.files import atomic_write_csv, read_csv_fields, read_csv_rows
from storage.models import AmbiguityDecision, AmbiguityReport, DecisionAction, TopicCatalog
from utils.errors import StorageError, TopicNotFoundError, UsageError, ValidationError
from utils.logger import setup_logger
from utils.templates import (
    NO_AMBIGUITY, TRIAGE_PROMPT, TRIAGE_TOPICS_PROMPT,
    format_ambiguity_by_topic, format_ambiguity_report, format_candidates,
)
from utils.validators import canonicalize, topic_filename

logger = setup_logger(__name__, app_settings.LOG_LEVEL, app_settings.DEBUG)

KEEP = "keep"
DECISION_ACTIONS = {
    "remove": DecisionAction.REMOVE_EVERYWHERE,
    "remove_from": DecisionAction.REMOVE_FROM,
    "whitelist": DecisionAction.WHITELIST,
}
# Короткие ответы интерактивного разбора
ANSWERS = {"k": KEEP, "r": "remove", "f": "remove_from", "w": "whitelist", "q": "quit"}


def register(subparsers) -> None:
    parser = subparsers.add_parser("tags", help="expand, commit and triage topic tags")
    actions = parser.add_subparsers(dest="action", required=True)

    expand = actions.add_parser("expand", help="propose tag candidates into pending files")
    expand.add_argument("--topic", help="expand one topic (default: all topics)")
    expand.add_argument("--limit", type=int, help="maximum candidates asked from the provider")
    expand.add_argument("--min-score", type=float, help="drop candidates scored below this value")
    expand.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    add = actions.add_parser("add", help="commit pending candidates or literal tags")
    add.add_argument("--topic", required=True)
    add.add_argument("--pending", action="store_true", help="commit the topic's pending file")
    add.add_argument("tags", nargs="*", default=[])

    report = actions.add_parser("report", help="show ambiguous tags per topic")
    report.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    triage = actions.add_parser("triage", help="resolve ambiguous tags")
    triage.add_argument("--decisions", help="file of 'tag,action[,topic...]' lines instead of prompts")

    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, settings: Settings) -> int:
    catalog = load_lexicons(settings)
    if args.action == "expand":
        return await _expand(args, settings, catalog)
    if args.action == "add":
        return _add(args, settings, catalog)
    if args.action == "report":
        report = detect_ambiguous(catalog)
        if args.json:
            emit_json([entry.model_dump() for entry in report.entries])
        else:
            emit(format_ambiguity_by_topic(report, catalog))
        return 0
    return _triage(args, settings, catalog)


# ---------------------------------------------------------------------------
# expand / add
# ---------------------------------------------------------------------------

def pending_path(settings: Settings, topic: str) -> Path:
    return Path(settings.PENDING_DIR) / topic_filename(topic)


async def _expand(args: argparse.Namespace, settings: Settings, catalog: TopicCatalog) -> int:
    limit = args.limit if args.limit is not None else settings.EXPAND_LIMIT
    min_score = args.min_score if args.min_score is not None else settings.EXPAND_MIN_SCORE
    provider = load_provider(settings.RELATED_WORDS_PATH)
    try:
        if args.topic:
            topic = canonicalize(args.topic)
            candidates = {topic: await expand_topic(catalog, topic, provider, limit, min_score)}
            errors: Dict[str, str] = {}
            report: Optional[AmbiguityReport] = None
        else:
            expansion = await expand_all(
                catalog, provider, limit, min_score, settings.MAX_CONCURRENT_QUERIES
            )
            candidates, errors, report = expansion.candidates, expansion.errors, expansion.report
    finally:
        await close_quietly(provider)

    for topic, tags in candidates.items():
        atomic_write_csv(pending_path(settings, topic), [[tag] for tag in tags])

    if args.json:
        emit_json({
            "candidates": candidates,
            "errors": errors,
            "ambiguous": [entry.model_dump() for entry in report.entries] if report else [],
        })
    else:
        emit(format_candidates(candidates))
        if report is not None and not report.is_empty:
            emit("ambiguous after commit:")
            emit(format_ambiguity_report(report))
    return 1 if errors else 0


def _add(args: argparse.Namespace, settings: Settings, catalog: TopicCatalog) -> int:
    topic = canonicalize(args.topic)
    if args.pending == bool(args.tags):
        raise UsageError("tags add: give either --pending or literal tags")
    if not catalog.has_topic(topic):
        raise TopicNotFoundError(f"topic '{topic}' not found")
    pending = pending_path(settings, topic)
    if args.pending:
        if not pending.is_file():
            raise StorageError(f"no pending candidates for topic '{topic}': {pending}")
        tags = read_csv_fields(pending)
    else:
        tags = args.tags

    catalog, added = add_tags(catalog, topic, tags)
    save_lexicons(catalog, settings)
    if args.pending:
        pending.unlink()
    emit(f"added {added} tag(s) to '{topic}'")
    return 0


# ---------------------------------------------------------------------------
# triage
# ---------------------------------------------------------------------------

def parse_decisions(path: str) -> List[AmbiguityDecision]:
    """Строки `tag,action[,topic...]`; keep означает оставить тег как есть"""
    try:
        rows = read_csv_rows(path, skip_comments=True)
    except (OSError, UnicodeDecodeError) as e:
        raise StorageError(f"cannot read decisions file {path}: {e}") from e

    decisions = []
    for row in rows:
        if len(row) < 2:
            raise ValidationError(f"{path}: decision for '{row[0]}' has no action")
        tag, action, topics = row[0], row[1].lower(), row[2:]
        if action == KEEP:
            continue
        if action not in DECISION_ACTIONS:
            raise ValidationError(f"{path}: unknown action '{row[1]}' for '{tag}'")
        if DECISION_ACTIONS[action] == DecisionAction.REMOVE_FROM and not topics:
            raise ValidationError(f"{path}: remove_from for '{tag}' names no topics")
        decisions.append(AmbiguityDecision(tag=tag, action=DECISION_ACTIONS[action], topics=topics))
    return decisions


def prompt_decisions(
    report: AmbiguityReport,
    ask: Optional[Callable[[str], str]] = None,
) -> Optional[List[AmbiguityDecision]]:
    """
    Опросить тренера по каждому неоднозначному тегу

    Returns:
        решения или None, если разбор прерван (quit или конец ввода)
    """
    ask = ask or input
    decisions = []
    for entry in report.entries:
        emit(f"{entry.tag}: {', '.join(entry.topics)}")
        while True:
            try:
                answer = ANSWERS.get(ask(TRIAGE_PROMPT).strip().lower()[:1])
            except EOFError:
                return None
            if answer is not None:
                break
        if answer == "quit":
            return None
        if answer == KEEP:
            continue
        topics: List[str] = []
        if answer == "remove_from":
            try:
                topics = [t for t in (canonicalize(p) for p in ask(TRIAGE_TOPICS_PROMPT).split(",")) if t]
            except EOFError:
                return None
        decisions.append(AmbiguityDecision(tag=entry.tag, action=DECISION_ACTIONS[answer], topics=topics))
    return decisions


def _triage(args: argparse.Namespace, settings: Settings, catalog: TopicCatalog) -> int:
    report = detect_ambiguous(catalog)
    if report.is_empty:
        emit(NO_AMBIGUITY)
        return 0

    if args.decisions:
        decisions = parse_decisions(args.decisions)
    else:
        decisions = prompt_decisions(report)
        if decisions is None:
            emit("triage aborted, lexicons unchanged")
            return 0

    # Все решения применяются вместе и записываются одним сохранением
    updated = resolve_ambiguity(catalog, decisions)
    save_lexicons(updated, settings)
    remaining = detect_ambiguous(updated)
    emit(f"applied {len(decisions)} decision(s), {len(remaining.entries)} ambiguous tag(s) left")
    return 0
