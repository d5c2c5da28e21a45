import logging
import threading
from collections.abc import Callable
from typing import Any
from typing import Hashable


class SeriesCache:
    """LRU cache of built series, safe to share between verifier workers."""

    def __init__(self, max_size: int = 128):
        self.cache: dict[Hashable, Any] = {}
        self.access_order: list[Hashable] = []
        self.max_size = max_size
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_or_build(self, key: Hashable, build: Callable[[], Any]) -> Any:
        with self._lock:
            if key in self.cache:
                # Move to end of access order (LRU)
                self.access_order.remove(key)
                self.access_order.append(key)
                self.hits += 1
                logging.debug(f"series cache hit: {key}")
                return self.cache[key]

            self.misses += 1
        logging.debug(f"series cache miss: {key}")
        value = build()

        with self._lock:
            if key in self.cache:
                return self.cache[key]
            if len(self.cache) >= self.max_size:
                oldest_key = self.access_order.pop(0)
                del self.cache[oldest_key]
            self.cache[key] = value
            self.access_order.append(key)
        return value

    def clear(self) -> None:
        with self._lock:
            self.cache.clear()
            self.access_order.clear()

    def __len__(self) -> int:
        return len(self.cache)
