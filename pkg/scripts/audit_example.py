#!/usr/bin/env python3
"""Script d'audit de l'exemple du rectangle."""
import argparse
import json
import logging
import os
import sys

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

from multismooth.formats import render
from multismooth.worked_example import audit_report, audit_worked_example

# Setup basic logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
_LOGGER = logging.getLogger(__name__)


def get_version_from_manifest():
    """Reads the version from the manifest.json file."""
    try:
        manifest_path = os.path.join(project_root, 'multismooth', 'manifest.json')
        with open(manifest_path, 'r') as f:
            manifest = json.load(f)
            return manifest.get("version", "unknown")
    except (FileNotFoundError, json.JSONDecodeError):
        return "unknown"


def audit(output_format: str) -> bool:
    """Recalcule l'exemple et signale les écarts avec les valeurs publiées."""
    _LOGGER.info(f"Audit de l'exemple (Version de multismooth: {get_version_from_manifest()})")
    result = audit_worked_example()
    _LOGGER.info(f"  Norme: {result.norm_value}")
    _LOGGER.info(f"  Sommets atteignant la norme: {len(result.attaining_vertices)}")
    _LOGGER.info(f"  Ordre de lissité: {result.order} (oracle: {result.oracle_order})")
    for divergence in result.divergences:
        _LOGGER.warning(f"  Écart: {divergence}")
    print(render(audit_report(result), output_format))
    if result.passed:
        _LOGGER.info("\033[92m✓ Les deux calculs concordent\033[0m")
    else:
        _LOGGER.error("\033[91m❌ Le calcul et l'oracle divergent\033[0m")
    return result.passed


def main():
    """Point d'entrée principal."""
    parser = argparse.ArgumentParser(description="Audit de l'exemple T(x, y, z, w) = (y + w, x).")
    parser.add_argument("--format", choices=["text", "json"], default="text", help="Format du rapport.")

    args = parser.parse_args()
    sys.exit(0 if audit(args.format) else 1)


if __name__ == "__main__":
    main()
