"""
Order of smoothness of vectors and linear operators between
finite-dimensional normed spaces.

See README.md for the command-line surface and the file formats.
"""
import json
import logging
from pathlib import Path

_LOGGER = logging.getLogger(__name__)

MANIFEST_PATH = Path(__file__).parent / "manifest.json"


def read_version() -> str:
    """Version string from manifest.json, "unknown" when unreadable."""
    try:
        manifest = json.loads(MANIFEST_PATH.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        _LOGGER.error("Could not read version from manifest.json")
        return "unknown"
    return manifest.get("version", "unknown")


__version__ = read_version()
