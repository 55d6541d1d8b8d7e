# Runner package initialization
"""
Scenario registry, scenario runner and the single-shot command tasks.
"""

from .scenarios import (
    SCENARIOS,
    ScenarioConfig,
    ScenarioRegistry,
    ScenarioResult,
    run_scenario,
)
from .tasks import VARIANTS, MODEL_VARIANTS, steady_task, stability_task
