"""Клиент datamuse-совместимого API связанных слов"""
from typing import List, Optional, Tuple

import httpx

from config import settings
from services.tag_expander import RelatedWordsProvider
from utils.errors import ProviderError
from utils.logger import setup_logger
from utils.retry import call_with_retry

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)


class DatamuseProvider(RelatedWordsProvider):
    """RelatedWordsProvider поверх HTTP (`?ml=<term>&max=<limit>`)"""

    def __init__(self, url: str, timeout_ms: int = 5000, client: Optional[httpx.AsyncClient] = None):
        self.url = url
        self._client = client or httpx.AsyncClient(
            timeout=httpx.Timeout(timeout_ms / 1000, connect=min(10.0, timeout_ms / 1000)),
            limits=httpx.Limits(max_keepalive_connections=5, max_connections=10),
        )

    async def _fetch(self, term: str, limit: int) -> list:
        response = await self._client.get(self.url, params={"ml": term, "max": limit})
        response.raise_for_status()
        return response.json()

    async def related(self, term: str, limit: int) -> List[Tuple[str, float]]:
        try:
            payload = await call_with_retry(self._fetch, term, limit)
        except httpx.HTTPError as e:
            raise ProviderError(f"related-words request for '{term}' failed: {e}") from e
        except ValueError as e:
            raise ProviderError(f"related-words response for '{term}' is not JSON: {e}") from e

        items = [item for item in payload if isinstance(item, dict) and item.get("word")]
        if not items:
            return []
        # Оценки API не ограничены сверху - нормируем на максимум ответа
        top = max(float(item.get("score", 0)) for item in items) or 1.0
        pairs = [(item["word"], max(0.0, float(item.get("score", 0))) / top) for item in items]
        pairs.sort(key=lambda pair: -pair[1])
        return pairs[:limit]

    async def close(self):
        await self._client.aclose()
