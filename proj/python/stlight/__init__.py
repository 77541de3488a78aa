"""Python access to the stlight simulator.

Configs are passed as text in the same ``section.key = value`` format the CLI reads.
"""

import json

from ._core import (
    StlightError,
    check_config,
    coefficients,
    conversion_probability,
    echo_config,
    format_number,
    group_velocity,
    list_presets,
    preset_config,
    spreading_rate,
)
from . import _core


def run(config: str = "", preset: str | None = None, out_dir: str = "", snapshot_every: int = 0) -> dict:
    """Run a scenario and return its summary as a dict; writes outputs when out_dir is set."""
    text = (preset_config(preset) + "\n" if preset else "") + config
    return json.loads(_core.run_summary(text, out_dir, snapshot_every))


__all__ = [
    "StlightError",
    "check_config",
    "coefficients",
    "conversion_probability",
    "echo_config",
    "format_number",
    "group_velocity",
    "list_presets",
    "preset_config",
    "run",
    "spreading_rate",
]
