"""Build structures on a 16x16x16 grid from natural-language instructions."""

from ._blockwright import (
    Agent,
    BlockwrightError,
    evaluate,
    generate_dataset,
    parse,
    replay_log,
)

__all__ = ["Agent", "BlockwrightError", "evaluate", "generate_dataset", "parse", "replay_log"]
__version__ = "0.1.0"
