"""Multi-view autoencoder fusion of text feature views for fake-news detection."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def data_path(name):
    """Filesystem path of a bundled data file (smoke corpus, lexicons, configs)."""
    return Path(str(resources.files("mvfuse").joinpath("data", name)))
