"""Trust-based self-healing routing defense for WSNs, plus the simulator used to evaluate it."""

__version__ = "0.1.0"

from .config import ScenarioConfig
from .simulator import run_scenario
from .metrics import summarize

__all__ = ["ScenarioConfig", "run_scenario", "summarize", "__version__"]
