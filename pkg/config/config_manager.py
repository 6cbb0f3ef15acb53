"""
Configuration management for the Bateman-Horn toolkit.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from models.core import EngineConfig, OutputFormat
from config.error_handling import ConfigurationError, ValidationError
from services.interfaces import ConfigManagerInterface


class ConfigManager(ConfigManagerInterface):
    """Manages configuration loading, validation, and merging."""

    DEFAULT_CONFIG_FILENAME = "bateman_horn_config.json"
    YAML_SUFFIXES = ('.yaml', '.yml')

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize ConfigManager.

        Args:
            logger: Optional logger instance
        """
        self.logger = logger or logging.getLogger(__name__)
        self._default_config = self._create_default_config()

    def _create_default_config(self) -> Dict[str, Any]:
        """Create default configuration dictionary."""
        return {
            "segment_bytes": 1 << 20,
            "memory_budget_bytes": None,
            "threads": 1,
            "brute_force_cutoff": 10_000,
            "miller_rabin_rounds": 40,
            "seed": 20240101,
            "checkpoint_decades": [10**3, 10**4, 10**5, 10**6, 10**7],
            "max_x": 10**9,
            "max_prime_bound": 10**8,
            "allow_large": False,
            "irreducibility_primes": 25,
            "divergence_threshold": 0.05,
            "convergence_delta": 1e-2,
            "ray_max_skip": 4,
            "nth_prime_max": 10**7,
            "show_progress": False,
            "output_format": "table",
            "golden_dir": "golden"
        }

    def load_config(self, config_path: Union[str, Path]) -> EngineConfig:
        """
        Load configuration from a JSON or YAML file.

        Args:
            config_path: Path to configuration file

        Returns:
            EngineConfig instance

        Raises:
            ConfigurationError: If configuration file cannot be loaded or is invalid
        """
        config_path = Path(config_path)

        if not config_path.exists():
            self.logger.warning(f"Configuration file not found: {config_path}")
            return self._create_engine_config(self._default_config)

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                if config_path.suffix.lower() in self.YAML_SUFFIXES:
                    config_data = yaml.safe_load(f) or {}
                else:
                    config_data = json.load(f)

            if not isinstance(config_data, dict):
                raise ValidationError("configuration root must be a mapping")

            self.logger.info(f"Loaded configuration from: {config_path}")

            merged_config = self._merge_configs(self._default_config, config_data)
            self._validate_config(merged_config)

            return self._create_engine_config(merged_config)

        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"Invalid JSON in configuration file {config_path}: {str(e)}",
                details={"file_path": str(config_path), "json_error": str(e)}
            )
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Invalid YAML in configuration file {config_path}: {str(e)}",
                details={"file_path": str(config_path)}
            )
        except ValidationError as e:
            raise ConfigurationError(
                f"Invalid configuration in {config_path}: {e.message}",
                details={"file_path": str(config_path)},
                original_exception=e
            )
        except Exception as e:
            raise ConfigurationError(
                f"Failed to load configuration from {config_path}: {str(e)}",
                details={"file_path": str(config_path)},
                original_exception=e
            )

    def save_config(self, config: EngineConfig, config_path: Union[str, Path]) -> None:
        """
        Save configuration to a JSON or YAML file.

        Raises:
            ConfigurationError: If configuration cannot be saved
        """
        self._write(config.to_dict(), Path(config_path))
        self.logger.info(f"Configuration saved to: {config_path}")

    def save_default_config(self, output_path: Union[str, Path]) -> None:
        """
        Generate and save default configuration file.

        Raises:
            ConfigurationError: If default configuration cannot be saved
        """
        self._write(self._default_config, Path(output_path))
        self.logger.info(f"Default configuration saved to: {output_path}")

    def _write(self, data: Dict[str, Any], path: Path) -> None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                if path.suffix.lower() in self.YAML_SUFFIXES:
                    yaml.safe_dump(data, f, sort_keys=True)
                else:
                    json.dump(data, f, indent=2, sort_keys=True)
        except Exception as e:
            raise ConfigurationError(
                f"Failed to save configuration to {path}: {str(e)}",
                details={"file_path": str(path)},
                original_exception=e
            )

    def merge_cli_args(self, config: EngineConfig, cli_args: Dict[str, Any]) -> EngineConfig:
        """
        Merge CLI arguments with existing configuration.
        CLI arguments take precedence over configuration file values.

        Args:
            config: Base EngineConfig instance
            cli_args: Dictionary of CLI arguments

        Returns:
            New EngineConfig instance with merged values
        """
        config_dict = config.to_dict()

        cli_mapping = {
            'threads': 'threads',
            'seed': 'seed',
            'allow_large': 'allow_large',
            'progress': 'show_progress',
            'segment_bytes': 'segment_bytes',
            'memory_budget': 'memory_budget_bytes',
            'brute_cutoff': 'brute_force_cutoff',
            'rounds': 'miller_rabin_rounds',
            'checkpoints': 'checkpoint_decades',
            'max_skip': 'ray_max_skip',
            'format': 'output_format',
            'golden_dir': 'golden_dir'
        }

        for cli_key, config_key in cli_mapping.items():
            if cli_key in cli_args and cli_args[cli_key] is not None:
                config_dict[config_key] = cli_args[cli_key]
                self.logger.debug(f"CLI override: {config_key} = {cli_args[cli_key]}")

        self._validate_config(config_dict)

        return self._create_engine_config(config_dict)

    def validate_config(self, config: EngineConfig) -> bool:
        """Validate an EngineConfig; raises ValidationError on the first problem."""
        self._validate_config(config.to_dict())
        return True

    def _merge_configs(self, base_config: Dict[str, Any], override_config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Merge two configuration dictionaries.

        Args:
            base_config: Base configuration dictionary
            override_config: Configuration to merge on top

        Returns:
            Merged configuration dictionary
        """
        merged = base_config.copy()

        for key, value in override_config.items():
            if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                merged[key] = self._merge_configs(merged[key], value)
            else:
                merged[key] = value

        return merged

    def _validate_config(self, config: Dict[str, Any]) -> None:
        """
        Validate configuration dictionary.

        Raises:
            ValidationError: If configuration is invalid
        """
        unknown = sorted(set(config) - set(self._default_config))
        if unknown:
            raise ValidationError(f"Unknown configuration field(s): {', '.join(unknown)}")

        positive_ints = [
            'segment_bytes', 'threads', 'brute_force_cutoff', 'miller_rabin_rounds',
            'max_x', 'max_prime_bound', 'irreducibility_primes', 'nth_prime_max'
        ]
        for name in positive_ints:
            value = config[name]
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValidationError(f"{name} must be a positive integer")

        if config['threads'] > 64:
            self.logger.warning("threads > 64 will be clamped to 64")

        budget = config['memory_budget_bytes']
        if budget is not None and (not isinstance(budget, int) or budget < 1):
            raise ValidationError("memory_budget_bytes must be a positive integer or null")

        if not isinstance(config['seed'], int):
            raise ValidationError("seed must be an integer")

        if not isinstance(config['ray_max_skip'], int) or config['ray_max_skip'] < 0:
            raise ValidationError("ray_max_skip must be a non-negative integer")

        for name in ('divergence_threshold', 'convergence_delta'):
            value = config[name]
            if not isinstance(value, (int, float)) or value <= 0:
                raise ValidationError(f"{name} must be a positive number")

        decades = config['checkpoint_decades']
        if not isinstance(decades, list) or not all(isinstance(d, int) and d >= 2 for d in decades):
            raise ValidationError("checkpoint_decades must be a list of integers >= 2")
        if any(b <= a for a, b in zip(decades, decades[1:])):
            raise ValidationError("checkpoint_decades must be strictly increasing")

        valid_formats = [f.value for f in OutputFormat]
        if config['output_format'] not in valid_formats:
            raise ValidationError(
                f"output_format must be one of {', '.join(valid_formats)}"
            )

    def _create_engine_config(self, config_dict: Dict[str, Any]) -> EngineConfig:
        """Create EngineConfig instance from dictionary."""
        kwargs = dict(config_dict)
        if kwargs.get('memory_budget_bytes') is None:
            # Fall back to the environment variable handled by the dataclass default
            kwargs.pop('memory_budget_bytes', None)
        kwargs['checkpoint_decades'] = list(kwargs['checkpoint_decades'])
        return EngineConfig(**kwargs)

    def get_config_path(self, config_dir: Optional[Union[str, Path]] = None) -> Path:
        """
        Get the default configuration file path.

        Args:
            config_dir: Optional directory for configuration file

        Returns:
            Path to configuration file
        """
        config_dir = Path.cwd() if config_dir is None else Path(config_dir)
        return config_dir / self.DEFAULT_CONFIG_FILENAME
