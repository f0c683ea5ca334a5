"""Cooperative joint sensing-communication UAV network analysis."""

__version__ = "0.1.0"

from .params import ConfigError, NetworkParams, from_config, load_config  # noqa: E402

__all__ = ["ConfigError", "NetworkParams", "from_config", "load_config", "__version__"]
