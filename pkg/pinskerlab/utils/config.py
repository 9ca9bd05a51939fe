"""Configuration management for pinskerlab runs."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

HOME_ENV = "PINSKERLAB_HOME"
SEED_ENV = "PINSKERLAB_SEED"

DEFAULTS: Dict[str, Any] = {
    "seed": 42,
    "samples": 10_000,
    "slack": 1e-12,
    "output_format": "csv",
    "workers": 1,
    "log_level": "WARNING",
    "figure_step": 0.005,
}


class ConfigManager:
    """Run defaults persisted as JSON; the directory is created on first save."""

    def __init__(self, config_dir: Optional[Path] = None):
        if config_dir is None:
            config_dir = Path(os.environ.get(HOME_ENV) or Path.home() / ".pinskerlab")
        self.config_dir = Path(config_dir)
        self.config_file = self.config_dir / "config.json"
        self._config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, falling back to defaults."""
        merged = dict(DEFAULTS)
        if self.config_file.exists():
            try:
                with open(self.config_file, 'r') as f:
                    stored = json.load(f)
                if isinstance(stored, dict):
                    merged.update(stored)
                else:
                    logger.warning("Ignoring %s: top level is not an object", self.config_file)
            except (json.JSONDecodeError, IOError) as e:
                logger.warning("Ignoring unreadable config %s: %s", self.config_file, e)
        return merged

    def _save_config(self) -> None:
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w') as f:
                json.dump(self._config, f, indent=2)
        except IOError as e:
            print(f"⚠️ Could not save config: {e}")

    def get(self, key: str, default: Any = None) -> Any:
        if default is None:
            default = DEFAULTS.get(key)
        return self._config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """Set configuration value and save."""
        self._config[key] = value
        self._save_config()

    def reset(self) -> None:
        self._config = dict(DEFAULTS)
        self._save_config()

    def get_seed(self) -> int:
        """Master seed: PINSKERLAB_SEED wins over the stored value."""
        env = os.environ.get(SEED_ENV)
        if env:
            try:
                return int(env)
            except ValueError:
                logger.warning("Ignoring %s=%r: not an integer", SEED_ENV, env)
        return int(self.get("seed"))

    def get_samples(self) -> int:
        return int(self.get("samples"))

    def get_slack(self) -> float:
        return float(self.get("slack"))

    def get_workers(self) -> int:
        return max(1, int(self.get("workers")))

    def get_output_format(self) -> str:
        return str(self.get("output_format"))

    def get_log_level(self) -> str:
        return str(self.get("log_level")).upper()

    def get_figure_step(self) -> float:
        return float(self.get("figure_step"))


# Global config manager instance
config = ConfigManager()
