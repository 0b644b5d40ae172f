import functools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from pclab import catalog as cat  # noqa: E402
from pclab.core.expr import evaluate  # noqa: E402


@functools.lru_cache(maxsize=None)
def group(expr: str, max_order: int = 10 ** 6):
    """Groups are immutable once built, so tests share them."""
    return evaluate(cat.resolve(expr), max_order=max_order)
