"""Валидация и канонизация данных"""
from typing import Optional, Tuple


def canonicalize(text: str) -> str:
    """Нижний регистр, обрезка краёв, схлопывание внутренних пробелов"""
    return " ".join(text.lower().split())


# Символы, недопустимые в имени темы: имя темы становится именем файла тегов
FORBIDDEN_TOPIC_CHARS = frozenset('/\\:\0')


def validate_topic_name(name: str) -> Tuple[bool, Optional[str]]:
    """Валидация имени темы (после канонизации)"""
    if not name:
        return False, "Topic name must not be empty"
    if "," in name:
        return False, f"Topic name must not contain commas: '{name}'"
    if any(ch in FORBIDDEN_TOPIC_CHARS for ch in name):
        return False, f"Topic name must not contain path separators: '{name}'"
    if name.startswith("."):
        return False, f"Topic name must not start with a dot: '{name}'"
    return True, None


def validate_tag(tag: str) -> Tuple[bool, Optional[str]]:
    """Валидация тега: слово или фраза без запятых"""
    if not tag:
        return False, "Tag must not be empty"
    if "," in tag:
        return False, f"Tag must not contain commas: '{tag}'"
    return True, None


def validate_limit(limit: int, min_val: int = 1) -> Tuple[bool, Optional[str]]:
    """Валидация лимитов (limit, cap)"""
    if limit < min_val:
        return False, f"Value must be at least {min_val}, got {limit}"
    return True, None


def canonical_username(username: str) -> str:
    """Имя пользователя без '@' и в нижнем регистре"""
    return username.strip().lstrip("@").lower()


def topic_filename(topic: str) -> str:
    """Имя файла тегов темы: пробелы заменяются подчёркиваниями"""
    return canonicalize(topic).replace(" ", "_") + ".csv"
