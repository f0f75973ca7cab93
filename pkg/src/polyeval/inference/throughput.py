"""Generation throughput accounting and the report cell format."""

from __future__ import annotations

from polyeval.errors import PolyevalError


class ZeroWallTime(PolyevalError):
    pass


def measure_throughput(generated_tokens: int, wall_time: float) -> float:
    """Average tokens per second for one (task, language) cell."""
    if wall_time <= 0:
        raise ZeroWallTime(f"wall time must be positive, got {wall_time}")
    return generated_tokens / wall_time


def format_cell(generated_tokens: int, wall_time: float) -> str:
    """Render ``tokens / seconds = tokens/s``, e.g. ``854 / 0.88 = 969.55``.

    Seconds are shown rounded to two decimals; the rate is computed from
    the unrounded wall time.
    """
    rate = measure_throughput(generated_tokens, wall_time)
    return f"{generated_tokens} / {wall_time:.2f} = {rate:.2f}"
