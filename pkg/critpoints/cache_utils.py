"""
Cache utilities for critical point sets.

Homotopy solves are the most expensive step of the limit and Euler
characteristic computations, so their results are kept in the Django cache.

Functions:
    - get_critical_cache_key: cache key for a (spec, seed) pair
    - get_cached_critical_points / set_cached_critical_points
    - clear_critical_cache: delete every cached critical point set

Cache Key Patterns:
    - {prefix}:critical:{spec_hash}:{seed}
    - {prefix}:critical:index  (keys written so far, for backends without delete_pattern)
"""

import logging
from typing import Any, Optional

from django.core.cache import cache

from eulerlab.settings_utils import get_setting

logger = logging.getLogger(__name__)


def _prefix():
    return get_setting("EULER_CACHE_KEY_PREFIX", "eulerlab")


def _version():
    return get_setting("EULER_CACHE_VERSION", 1)


def _index_key():
    return f"{_prefix()}:critical:index"


def get_critical_cache_key(spec, seed: int) -> str:
    return f"{_prefix()}:critical:{spec.cache_key()}:{int(seed)}"


def get_cached_critical_points(cache_key: str) -> Optional[Any]:
    """
    Cached CriticalPointSet, or None if missing or the cache fails.
    """
    try:
        result = cache.get(cache_key, version=_version())
        if result is not None:
            logger.debug(f"Cache hit for key: {cache_key}")
        return result
    except Exception as e:
        logger.warning(f"Cache get failed for key {cache_key}: {e}")
        return None


def set_cached_critical_points(cache_key: str, result: Any, timeout: Optional[int] = None) -> bool:
    if timeout is None:
        timeout = get_setting("EULER_CRITICAL_CACHE_TIMEOUT", 3600)
    try:
        cache.set(cache_key, result, timeout, version=_version())
        index = cache.get(_index_key(), set(), version=_version())
        index.add(cache_key)
        cache.set(_index_key(), index, None, version=_version())
        logger.debug(f"Cached critical points for key: {cache_key}")
        return True
    except Exception as e:
        logger.warning(f"Cache set failed for key {cache_key}: {e}")
        return False


def clear_critical_cache() -> int:
    """
    Delete every cached critical point set.

    Returns:
        int: number of entries cleared
    """
    try:
        if hasattr(cache, "delete_pattern"):
            count = cache.delete_pattern(f"{_prefix()}:critical:*", version=_version())
            logger.info(f"Cleared {count} critical point cache entries")
            return count
        index = cache.get(_index_key(), set(), version=_version())
        cache.delete_many(list(index) + [_index_key()], version=_version())
        logger.info(f"Cleared {len(index)} critical point cache entries")
        return len(index)
    except Exception as e:
        logger.error(f"Error clearing critical point cache: {e}")
        return 0
