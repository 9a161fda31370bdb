"""Thread-safe cache of enumerated balls"""

import logging
import threading
from collections import OrderedDict
from typing import Any, Dict, Optional, Tuple

logger = logging.getLogger(__name__)


class BallCache:
    """
    Thread-safe, size-bounded cache of word balls for a single group.

    Keys are radii. Entries are evicted least-recently-used once the cache
    holds ``max_entries`` balls. A cached ball is only served when it was
    enumerated completely, so a hit never depends on the caller's element cap.
    """

    def __init__(self, max_entries: int = 32):
        """
        Initialize ball cache.

        Args:
            max_entries: Maximum number of radii kept at once
        """
        self.balls: "OrderedDict[int, Tuple[Any, ...]]" = OrderedDict()
        self.max_entries = max_entries
        self.lock = threading.RLock()
        self.hits = 0
        self.misses = 0

    def get(self, radius: int) -> Optional[Tuple[Any, ...]]:
        """
        Get a cached ball.

        Args:
            radius: Word-length radius

        Returns:
            The ball in enumeration order, or None on a miss
        """
        with self.lock:
            ball = self.balls.get(radius)

            if ball is None:
                self.misses += 1
                return None

            self.balls.move_to_end(radius)
            self.hits += 1
            return ball

    def set(self, radius: int, ball: Tuple[Any, ...]) -> None:
        """
        Store a completely enumerated ball.

        Args:
            radius: Word-length radius
            ball: Elements in enumeration order
        """
        with self.lock:
            self.balls[radius] = ball
            self.balls.move_to_end(radius)

            while len(self.balls) > self.max_entries:
                evicted, _ = self.balls.popitem(last=False)
                logger.debug(f"Evicted ball of radius {evicted} from cache")

    def stats(self) -> Dict[str, Any]:
        """
        Get cache statistics for logging.

        Returns:
            Dict with cache stats
        """
        with self.lock:
            return {
                "cached_balls": len(self.balls),
                "largest_radius": max(self.balls) if self.balls else None,
                "hits": self.hits,
                "misses": self.misses,
                "max_entries": self.max_entries,
            }
