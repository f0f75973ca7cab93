"""polyeval: unified multilingual LLM evaluation.

Aligns heterogeneous benchmark language labels to canonical
``ISO639-3_Script`` tags, selects language-specific prompts, enumerates
pivot-centric translation directions, drives a model server over a fixed
wire protocol, and computes translation/classification/summarization/
intrinsic metrics with per-sample export.
"""

__version__ = "0.1.0"

from polyeval.errors import PolyevalError

__all__ = ["PolyevalError", "__version__"]
