"""Повтор HTTP-запросов с exponential backoff"""
import asyncio

import httpx

from config import settings
from utils.logger import setup_logger

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)


def _is_retryable(error: Exception) -> bool:
    if isinstance(error, httpx.HTTPStatusError):
        return error.response.status_code == 429 or error.response.status_code >= 500
    return isinstance(error, (httpx.TimeoutException, httpx.TransportError))


async def call_with_retry(func, *args, max_retries: int = 3, **kwargs):
    """Вызов функции с exponential backoff при таймаутах, сетевых ошибках и 429/5xx"""
    for attempt in range(max_retries):
        try:
            return await func(*args, **kwargs)
        except httpx.HTTPError as e:
            if not _is_retryable(e) or attempt == max_retries - 1:
                if _is_retryable(e):
                    logger.error(f"{type(e).__name__} после {max_retries} попыток: {e}")
                raise
            wait_time = (2 ** attempt) + (attempt * 0.5)  # 1s, 2.5s
            logger.warning(
                f"{type(e).__name__} (попытка {attempt + 1}/{max_retries}): повтор через {wait_time:.2f} сек"
            )
            await asyncio.sleep(wait_time)
