#!/usr/bin/env python3
"""Script de vérification des suites aléatoires de multismooth."""
import argparse
import json
import logging
import os
import sys

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

from multismooth.verification import THEOREM_IDS, verify_theorem

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


def run_suites(theorems, seeds: int, seed0: int) -> bool:
    """Lance chaque suite et affiche un résumé."""
    _LOGGER.info(f"Démarrage des vérifications (Version de multismooth: {get_version_from_manifest()})")
    all_ok = True
    for theorem_id in theorems:
        report = verify_theorem(theorem_id, seeds, seed0)
        if report.ok:
            _LOGGER.info(f"\033[92m✓ {theorem_id}: {report.passes}/{report.seeds_run} graines en {report.wall_time:.1f}s\033[0m")
        else:
            all_ok = False
            _LOGGER.error(f"\033[91m❌ {theorem_id}: {len(report.failures)} échec(s) sur {report.seeds_run} graines\033[0m")
            for failure in report.failures[:3]:
                _LOGGER.error(f"    graine {failure.seed}: {failure.message}")
        if report.histogram:
            _LOGGER.info(f"    Répartition: {dict(sorted(report.histogram.items()))}")
        if report.rejections:
            _LOGGER.info(f"    Tirages rejetés: {report.rejections}")
    return all_ok


def main():
    """Point d'entrée principal."""
    parser = argparse.ArgumentParser(description="Vérifie les propriétés de lissité sur des instances aléatoires.")
    parser.add_argument("theorems", nargs="*", help=f"Suites à lancer parmi {', '.join(THEOREM_IDS)} (toutes par défaut).")
    parser.add_argument("--seeds", type=int, default=100, help="Nombre de graines par suite.")
    parser.add_argument("--seed", type=int, default=1, help="Première graine.")

    args = parser.parse_args()
    unknown = [t for t in args.theorems if t not in THEOREM_IDS]
    if unknown:
        _LOGGER.error(f"Suite(s) inconnue(s): {', '.join(unknown)}")
        sys.exit(2)
    if args.seeds < 1:
        _LOGGER.error("Le nombre de graines doit être positif.")
        sys.exit(2)

    sys.exit(0 if run_suites(args.theorems or THEOREM_IDS, args.seeds, args.seed) else 1)


if __name__ == "__main__":
    main()
