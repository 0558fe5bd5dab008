#!/usr/bin/env python3
"""
Magnetic Surface Lab - Main Application Entry Point

Seeded, reproducible experiments on constant-field magnetic flows of the
genus-2 Bolza surface. Every subcommand writes a JSON report (or a CSV
table) to stdout or to --output.

Usage:
    python main.py classify --B 2 --E 1
"""

import sys
import logging
from pathlib import Path
from typing import Optional, Sequence

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from config.settings import Settings
from cli.run_config import RunConfig, parse_args
from cli.runner import EXIT_RUNTIME_ERROR, ExperimentRunner
from utils.logger import setup_logging


class MagneticSurfaceLab:
    """Main application class coordinating one command-line run."""

    def __init__(self, argv: Optional[Sequence[str]] = None):
        self.argv = argv
        self.config: RunConfig = None
        self.runner: ExperimentRunner = None

    def initialize_application(self) -> None:
        """Parse flags and set up logging.

        argparse exits with status 2 on malformed flags.
        """
        self.config = parse_args(self.argv)
        setup_logging(log_level=self.config.log_level, log_file=self.config.log_file)
        logging.info(f"Starting {Settings.APP_NAME} {Settings.APP_VERSION}")
        self.runner = ExperimentRunner()

    def run(self) -> int:
        """Run the selected experiment.

        Returns:
            int: Application exit code
        """
        self.initialize_application()
        try:
            return self.runner.run(self.config)
        except Exception as e:
            logging.exception(f"Application execution failed: {e}")
            return EXIT_RUNTIME_ERROR
        finally:
            logging.info(f"{Settings.APP_NAME} shutdown complete")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Application entry point.

    Returns:
        int: Application exit code
    """
    lab = MagneticSurfaceLab(argv)
    return lab.run()


if __name__ == "__main__":
    sys.exit(main())
