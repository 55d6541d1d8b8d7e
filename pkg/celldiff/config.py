#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Environment configuration for celldiff
Loads environment variables from a .env file and exposes runtime settings
"""

import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).resolve().parent
DEFAULT_PRESETS_DIR = PACKAGE_DIR / 'data' / 'presets'


def load_environment_variables(env_file: Optional[Path] = None) -> bool:
    """Load environment variables from .env file"""
    env_file = Path(env_file) if env_file else Path('.env')
    if not env_file.exists():
        logger.debug(".env file not found, using default environment")
        return False

    logger.info(f"Loading environment variables from {env_file}")
    # Variables already exported in the shell win over the file
    return load_dotenv(env_file, override=False)


@dataclass(frozen=True)
class Settings:
    """Runtime settings resolved from the environment"""

    output_dir: Path = Path('output')
    log_level: str = 'INFO'
    presets_dir: Path = DEFAULT_PRESETS_DIR
    workers: int = 1
    snapshot_count: int = 200

    @classmethod
    def from_env(cls) -> 'Settings':
        workers = int(os.environ.get('CELLDIFF_WORKERS', '1'))
        snapshots = int(os.environ.get('CELLDIFF_SNAPSHOTS', '200'))
        return cls(
            output_dir=Path(os.environ.get('CELLDIFF_OUTPUT_DIR', 'output')),
            log_level=os.environ.get('CELLDIFF_LOG_LEVEL', 'INFO').upper(),
            presets_dir=Path(os.environ.get('CELLDIFF_PRESETS_DIR', str(DEFAULT_PRESETS_DIR))),
            workers=max(1, workers),
            snapshot_count=max(2, snapshots),
        )

    def configure_logging(self) -> None:
        """Set up root logging the way the entry points expect"""
        logging.basicConfig(
            level=getattr(logging, self.log_level, logging.INFO),
            format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        )
