"""Reference implementation of the polyeval model-server wire protocol."""

from model_server.toy import ToyBackend, ToySpec
from model_server.server import serve

__version__ = "0.1.0"

__all__ = ["ToyBackend", "ToySpec", "serve", "__version__"]
