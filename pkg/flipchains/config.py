import argparse
import json
import logging
import os
from pathlib import Path
from typing import Any

import pkg_resources

from .errors import ConfigError

logger = logging.getLogger(__name__)

STATE_CEILING_ENV = "FLIPCHAINS_STATE_CEILING"

# flag name -> dotted config key
ARG_KEYS = {
    "seed": "simulation.seed",
    "steps": "simulation.steps",
    "samples": "samples.count",
    "ceiling": "ceilings.states",
    "threads": "threads",
    "format": "output_format",
    "log_level": "logging.level",
}


class Config:
    def __init__(self, config_dir: str = "config"):
        self.config_dir = Path(config_dir)
        self.user_config = self.config_dir / "config.json"

        # First try default_config.json next to the user config
        self.default_config = self.config_dir / "default_config.json"

        # If not found, fall back to the packaged defaults
        if not self.default_config.exists():
            try:
                path = pkg_resources.resource_filename('flipchains', 'config/default_config.json')
                self.default_config = Path(path)
                logger.debug(f"Using packaged default config from {self.default_config}")
            except Exception as e:
                logger.error(f"Error finding default config: {e}")
                raise

        self.load_config()

    def load_config(self):
        """Load configuration with cascade:
        1. user config (config.json)
        2. default config (default_config.json)
        Then apply the state ceiling environment override.
        """
        try:
            if self.user_config.exists():
                logger.debug(f"Loading user config from {self.user_config}")
                with open(self.user_config) as f:
                    self.config = json.load(f)
            else:
                logger.debug(f"No user config found, loading default config from {self.default_config}")
                with open(self.default_config) as f:
                    self.config = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in config: {e}") from e

        override = os.environ.get(STATE_CEILING_ENV)
        if override:
            try:
                self.set("ceilings.states", int(override))
            except ValueError:
                raise ConfigError(f"{STATE_CEILING_ENV} must be an integer, got {override!r}") from None
            logger.debug(f"State ceiling overridden from environment: {override}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get a value by dotted key, e.g. ``ceilings.states``."""
        node: Any = self.config
        for part in key.split('.'):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def set(self, key: str, value: Any):
        parts = key.split('.')
        node = self.config
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value

    def update_from_args(self, args: argparse.Namespace):
        """Update configuration with command line arguments."""
        for key, value in vars(args).items():
            if value is not None and key in ARG_KEYS:  # Only update if argument was provided
                self.set(ARG_KEYS[key], value)

    def save_user_config(self):
        """Save current configuration to user config file."""
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.user_config, 'w') as f:
                json.dump(self.config, f, indent=2)
            logger.debug(f"Saved user config to {self.user_config}")
        except Exception as e:
            logger.error(f"Error saving user config: {e}")
            raise

    @property
    def state_ceiling(self) -> int:
        return int(self.get("ceilings.states", 30000))
