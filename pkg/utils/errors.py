"""Исключения приложения с кодами выхода CLI"""
from typing import Any, Optional


class EICVError(Exception):
    """Базовая ошибка предметной области"""
    exit_code = 1


class ValidationError(EICVError):
    """Некорректный ввод (пустое имя, запятая в теге и т.п.)"""


class DuplicateTopicError(EICVError):
    """Тема уже есть в каталоге"""


class TopicNotFoundError(EICVError):
    """Темы нет в каталоге"""


class ProviderError(EICVError):
    """Ошибка провайдера связанных слов"""

    def __init__(self, message: str, topic: Optional[str] = None):
        super().__init__(message)
        self.topic = topic


class BackendError(EICVError):
    """Ошибка транспорта источника знаний"""


class ClassificationError(EICVError):
    """Классификация не завершена; partial содержит собранную диагностику"""

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(EICVError):
    """Ошибка оценки (например, пустой датасет)"""


class ConfigError(EICVError):
    """Некорректная конфигурация"""


class StorageError(EICVError):
    """Ошибка чтения/записи файлов"""
    exit_code = 2


class CatalogLoadError(StorageError):
    """Не удалось загрузить каталог; topic указывает тему с отсутствующим файлом"""

    def __init__(self, message: str, topic: Optional[str] = None):
        super().__init__(message)
        self.topic = topic


class TweetNotFoundError(EICVError):
    """Пользователь неизвестен или у него нет твитов"""
    exit_code = 3


class UsageError(EICVError):
    """Неверные аргументы командной строки"""
    exit_code = 64
