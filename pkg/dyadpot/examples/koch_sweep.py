"""
Koch snowflake sweep

Runs the level sweep configured in koch.json and saves the report next to the
working directory as koch_sweep.csv.
"""

from dyadpot.converge.sweep import run_sweep
from dyadpot.export.save import save_csv
from dyadpot.loader.config import ConfigLoader
from dyadpot.logger import Logger as log
from dyadpot.logger import setup_logging

if __name__ == "__main__":
    try:
        setup_logging()
        config = ConfigLoader("koch.json").config
        report = run_sweep(config.sweep_config())
        for row in report.rows:
            log.parameter(f"level {row['level']} c+", row["c_plus"])
        save_csv(report.to_frame(), "koch_sweep.csv")
        log.message("Saved koch_sweep.csv")
    except FileNotFoundError as e:
        log.message(f"Error: {e}")
