"""Edge-learning-aided offloading with pre-braking for pedestrian collision avoidance."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

from .errors import ConfigError

__all__ = ["ConfigError", "__version__"]
