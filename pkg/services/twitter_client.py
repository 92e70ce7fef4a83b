"""Живой SearchBackend поверх Twitter-совместимого REST API (в тестах сети нет)"""
from datetime import datetime
from typing import List, Optional

import httpx

from config import settings
from services.knowledge_source import SearchBackend
from storage.models import Tweet
from utils.errors import BackendError
from utils.logger import setup_logger
from utils.retry import call_with_retry
from utils.validators import canonical_username

logger = setup_logger(__name__, settings.LOG_LEVEL, settings.DEBUG)

CREATED_AT_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def status_to_tweet(status: dict) -> Tweet:
    """Статус API -> Tweet; популярность = лайки + ретвиты"""
    timestamp = None
    if status.get("created_at"):
        try:
            timestamp = int(datetime.strptime(status["created_at"], CREATED_AT_FORMAT).timestamp())
        except ValueError:
            logger.debug(f"Не удалось разобрать created_at: {status['created_at']}")
    return Tweet(
        id=str(status.get("id_str") or status.get("id")),
        text=status.get("full_text") or status.get("text") or "",
        author=(status.get("user") or {}).get("screen_name"),
        timestamp=timestamp,
        popularity=int(status.get("favorite_count") or 0) + int(status.get("retweet_count") or 0),
    )


class TwitterSearchBackend(SearchBackend):
    """Поиск популярных/свежих твитов и последнего твита пользователя через HTTP"""

    def __init__(self, base_url: str, token: str, client: Optional[httpx.AsyncClient] = None):
        if not token:
            raise BackendError("KNOWLEDGE_API_TOKEN is not configured")
        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.AsyncClient(
            headers={"Authorization": f"Bearer {token}"},
            timeout=httpx.Timeout(30.0, connect=10.0),
            limits=httpx.Limits(max_keepalive_connections=5, max_connections=10),
        )

    async def _get(self, path: str, params: dict):
        response = await self._client.get(f"{self.base_url}/{path}", params=params)
        response.raise_for_status()
        return response.json()

    async def _request(self, path: str, params: dict):
        try:
            return await call_with_retry(self._get, path, params)
        except Exception as e:
            raise BackendError(f"knowledge API request {path} failed: {e}") from e

    async def _search(self, keyword: str, cap: int, result_type: str) -> List[Tweet]:
        if cap <= 0:
            return []
        payload = await self._request(
            "search/tweets.json",
            {"q": keyword, "result_type": result_type, "count": cap, "lang": "en", "tweet_mode": "extended"},
        )
        return [status_to_tweet(status) for status in payload.get("statuses", [])][:cap]

    async def search_popular(self, keyword: str, cap: int) -> List[Tweet]:
        return await self._search(keyword, cap, "popular")

    async def search_recent(self, keyword: str, cap: int) -> List[Tweet]:
        return await self._search(keyword, cap, "recent")

    async def last_tweet(self, username: str) -> Optional[Tweet]:
        try:
            payload = await self._request(
                "statuses/user_timeline.json",
                {"screen_name": canonical_username(username), "count": 1, "tweet_mode": "extended"},
            )
        except BackendError as e:
            cause = e.__cause__
            if isinstance(cause, httpx.HTTPStatusError) and cause.response.status_code == 404:
                return None
            raise
        return status_to_tweet(payload[0]) if payload else None

    async def close(self):
        await self._client.aclose()
