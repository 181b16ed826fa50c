#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Unified configuration loader

Loads config/config_unified.yaml and exposes the analysis, engine and
verification parameters used across the toupie package.
"""

import copy
import os
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import sympy
import yaml

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parents[3] / "config" / "config_unified.yaml"

_DEFAULT_CONFIG: Dict[str, Any] = {
    'analysis': {
        'max_branches': 16,
        'witness_sweep_radius': 3,
        'oracle_prime': 101,
    },
    'engine': {
        'max_truncation_paths': 4000,
        'iso_search_budget': 64,
        'split_search_budget': 64,
        'search_seed': 0,
    },
    'verification': {
        'lambdas': [1, 2, 3],
        'random_modules': 20,
        'random_module_seed': 0,
    },
    'pipeline': {
        'basic': {
            'default_output_dir': 'results',
            'default_log_level': 'INFO',
            'max_parallel_jobs': 4,
        },
    },
    'system': {
        'logging': {
            'log_file': 'toupie.log',
            'log_format': '%(asctime)s - %(levelname)s - %(message)s',
        },
    },
}

# Environment variables that override single values: name -> (section, key, type)
_ENV_OVERRIDES = {
    'TOUPIE_MAX_BRANCHES': ('analysis', 'max_branches', int),
}


class ConfigLoader:
    """Unified configuration loader."""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialise the loader.

        Args:
            config_file: Path to the YAML file. Defaults to $TOUPIE_CONFIG, then
                the repository's config/config_unified.yaml.
        """
        self.config_file = str(config_file or os.getenv('TOUPIE_CONFIG') or DEFAULT_CONFIG_FILE)
        self.config: Dict[str, Any] = {}
        self.logger = logging.getLogger(__name__)
        self._load_config()

    def _load_config(self) -> None:
        """Load the configuration file, falling back to built-in defaults."""
        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded = yaml.safe_load(f) or {}
                self.config = _merge(self._create_default_config(), loaded)
                self.logger.debug(f"Loaded configuration file: {self.config_file}")
            else:
                self.logger.warning(f"Configuration file not found: {self.config_file}, using defaults")
                self.config = self._create_default_config()
        except Exception as e:
            self.logger.error(f"Failed to load configuration file: {e}")
            self.config = self._create_default_config()

    @staticmethod
    def _create_default_config() -> Dict[str, Any]:
        """Return a fresh copy of the built-in defaults."""
        return copy.deepcopy(_DEFAULT_CONFIG)

    def reload(self, config_file: Optional[str] = None) -> None:
        """Re-read the configuration, optionally from another file."""
        if config_file:
            self.config_file = str(config_file)
        self._load_config()

    def _section_param(self, section: str, param: str, default: Any = None) -> Any:
        for env_name, (env_section, env_param, cast) in _ENV_OVERRIDES.items():
            if (env_section, env_param) == (section, param) and os.getenv(env_name):
                try:
                    return cast(os.environ[env_name])
                except ValueError:
                    self.logger.warning(f"Ignoring malformed {env_name}={os.environ[env_name]!r}")
        return self.config.get(section, {}).get(param, default)

    def get_analysis_param(self, param: str, default: Any = None) -> Any:
        """Get an ideal-analysis parameter."""
        return self._section_param('analysis', param, default)

    def get_engine_param(self, param: str, default: Any = None) -> Any:
        """Get a representation-engine parameter."""
        return self._section_param('engine', param, default)

    def get_verification_param(self, param: str, default: Any = None) -> Any:
        """Get a verification parameter."""
        return self._section_param('verification', param, default)

    def get_pipeline_param(self, section: str, param: str, default: Any = None) -> Any:
        """Get a pipeline parameter."""
        value = self.config.get('pipeline', {}).get(section, {}).get(param, default)
        if (section, param) == ('basic', 'default_log_level'):
            return os.getenv('TOUPIE_LOG_LEVEL', value)
        return value

    def get_system_param(self, section: str, param: str, default: Any = None) -> Any:
        """Get a system parameter."""
        return self.config.get('system', {}).get(section, {}).get(param, default)

    def validate_parameters(self) -> List[str]:
        """
        Check parameter ranges.

        Returns:
            List of error messages, empty when the configuration is usable
        """
        errors = []
        for section, key in (('analysis', 'max_branches'), ('analysis', 'witness_sweep_radius'),
                             ('engine', 'max_truncation_paths'), ('engine', 'iso_search_budget'),
                             ('engine', 'split_search_budget')):
            value = self._section_param(section, key)
            if not isinstance(value, int) or value <= 0:
                errors.append(f"{section}.{key} must be a positive integer, got {value!r}")
        if not isinstance(self.get_verification_param('random_modules'), int) \
                or self.get_verification_param('random_modules') < 0:
            errors.append("verification.random_modules must be a non-negative integer")
        prime = self.get_analysis_param('oracle_prime')
        if not isinstance(prime, int) or not sympy.isprime(prime):
            errors.append(f"analysis.oracle_prime must be a prime, got {prime!r}")
        lambdas = self.get_verification_param('lambdas') or []
        if len({str(x) for x in lambdas}) != len(lambdas):
            errors.append("verification.lambdas must be distinct")
        log_level = self.get_pipeline_param('basic', 'default_log_level')
        if log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR'):
            errors.append("pipeline.basic.default_log_level must be one of DEBUG, INFO, WARNING or ERROR")
        return errors

    def print_config_summary(self) -> None:
        """Print a configuration summary."""
        print("=== Configuration summary ===")
        print(f"Configuration file: {self.config_file}")
        for section in ('analysis', 'engine', 'verification'):
            print()
            print(f"{section}:")
            for key in sorted(self.config.get(section, {})):
                print(f"  {key}: {self._section_param(section, key)}")
        print()
        print(f"Default output directory: {self.get_pipeline_param('basic', 'default_output_dir')}")
        print(f"Default log level: {self.get_pipeline_param('basic', 'default_log_level')}")


def _merge(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key] = _merge(base[key], value)
        else:
            base[key] = value
    return base


# Global configuration instance
config_loader = ConfigLoader()


def get_analysis_param(param: str, default: Any = None) -> Any:
    return config_loader.get_analysis_param(param, default)


def get_engine_param(param: str, default: Any = None) -> Any:
    return config_loader.get_engine_param(param, default)


def get_verification_param(param: str, default: Any = None) -> Any:
    return config_loader.get_verification_param(param, default)


def get_pipeline_param(section: str, param: str, default: Any = None) -> Any:
    return config_loader.get_pipeline_param(section, param, default)


def get_system_param(section: str, param: str, default: Any = None) -> Any:
    return config_loader.get_system_param(section, param, default)


if __name__ == "__main__":
    config_loader.print_config_summary()
