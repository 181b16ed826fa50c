#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Configuration Validation Script

This script validates the unified configuration file and reports the
parameters the classifier will run with.
"""

import sys
import logging
from pathlib import Path

# Add src directory to Python path
src_dir = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_dir))

from toupie.tools.config_loader import config_loader


def setup_logging():
    """Setup logging"""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout)
        ]
    )


def main():
    """Print the configuration summary and the parameter check; exit 1 on errors."""
    setup_logging()
    logger = logging.getLogger(__name__)

    print("=" * 60)
    print("Toupie - configuration check")
    print("=" * 60)

    config_loader.print_config_summary()
    print()

    errors = config_loader.validate_parameters()
    for error in errors:
        logger.error(f"[ERROR] {error}")
    if errors:
        print(f"{len(errors)} parameter error(s); fix {config_loader.config_file}")
        return 1
    logger.info("[OK] parameters: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
