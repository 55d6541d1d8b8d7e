# Data package initialization
"""
Bundled parameter presets and the JSON configuration loader.
"""

from .loader import (
    list_presets,
    load_config_file,
    load_preset,
    merge_config,
    build_table,
    build_model,
    build_discrete,
)
