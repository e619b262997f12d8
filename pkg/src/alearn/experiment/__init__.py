from .config import ScenarioConfig, dump_config, load_config, parse_config
from .runner import build_datasets, report, run_cell, run_cells, run_scenario, sweep

__all__ = ["ScenarioConfig", "build_datasets", "dump_config", "load_config", "parse_config", "report", "run_cell",
           "run_cells", "run_scenario", "sweep"]
