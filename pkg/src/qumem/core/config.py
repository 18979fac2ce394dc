"""Configuration management for qumem."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import toml
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator

from ..models.results import Numerics

logger = logging.getLogger(__name__)


class Config(BaseModel):
    """qumem configuration management."""

    model_config = ConfigDict(extra="ignore", validate_assignment=True)

    # Parallelism
    threads: int = Field(default=0, description="Worker threads (0 = machine parallelism)", ge=0)

    # Oracle
    oracle_max_dim: int = Field(default=12, description="Largest d for the brute-force channel", ge=2)
    allow_large_oracle: bool = Field(default=False, description="Lift the oracle dimension cap")

    # Eigensolver
    eigensolver: str = Field(default="jacobi", description="Hermitian eigensolver (jacobi or lapack)")
    jacobi_tol: float = Field(default=1e-14, description="Off-diagonal mass at convergence", gt=0.0)
    jacobi_max_sweeps: int = Field(default=100, description="Jacobi sweep limit", ge=1)

    # Analysis
    crossover_tol: float = Field(default=1e-8, description="Final bracket width of mu_c", gt=0.0)
    crossover_grid: int = Field(default=1001, description="Scan points for sign changes", ge=2)
    zero_tol: float = Field(default=1e-12, description="|Delta I| treated as a tie", ge=0.0)
    validation_tol: float = Field(default=1e-10, description="Closed form vs oracle tolerance", gt=0.0)
    sweep_grid: int = Field(default=101, description="Default mu grid size", ge=2)
    figure_d_max: int = Field(default=20, description="Largest d in figure presets", ge=2)

    # Output
    output_format: str = Field(default="csv", description="Default output format")
    per_use: bool = Field(default=False, description="Report information per channel use")

    # Debug Settings
    debug: bool = Field(default=False, description="Enable debug mode")
    log_level: str = Field(default="WARNING", description="Logging level")
    log_file: Optional[str] = Field(default=None, description="Optional log file")

    _config_file: Optional[Path] = PrivateAttr(default=None)

    def __init__(self, config_file: Optional[Path] = None, debug: bool = False, **kwargs: Any):
        """Initialize configuration."""
        from dotenv import load_dotenv
        load_dotenv()

        # defaults < environment < config file < explicit keywords
        merged: Dict[str, Any] = {}
        if debug:
            merged['debug'] = debug

        merged.update(self._load_from_env())

        found = config_file if config_file else self._find_default_config()
        if found:
            merged.update(self._load_from_file(found))

        merged.update(kwargs)
        super().__init__(**merged)

        self._config_file = found

    @staticmethod
    def _load_from_env() -> Dict[str, Any]:
        """Load configuration from environment variables."""
        env_mapping = {
            'QUMEM_THREADS': ('threads', int),
            'QUMEM_ORACLE_MAX_DIM': ('oracle_max_dim', int),
            'QUMEM_ALLOW_LARGE_ORACLE': ('allow_large_oracle', bool),
            'QUMEM_EIGENSOLVER': ('eigensolver', str),
            'QUMEM_CROSSOVER_TOL': ('crossover_tol', float),
            'QUMEM_OUTPUT_FORMAT': ('output_format', str),
            'QUMEM_PER_USE': ('per_use', bool),
            'QUMEM_DEBUG': ('debug', bool),
            'QUMEM_LOG_LEVEL': ('log_level', str),
            'QUMEM_LOG_FILE': ('log_file', str),
        }

        config: Dict[str, Any] = {}
        for env_key, (config_key, kind) in env_mapping.items():
            value = os.getenv(env_key)
            if value is None:
                continue
            if kind is bool:
                config[config_key] = value.lower() in ('true', '1', 'yes', 'on')
            elif kind is str:
                config[config_key] = value
            else:
                try:
                    config[config_key] = kind(value)
                except ValueError:
                    continue

        return config

    @staticmethod
    def _load_from_file(config_file: Path) -> Dict[str, Any]:
        """Load configuration from file."""
        if not config_file.exists():
            return {}

        try:
            if config_file.suffix.lower() == '.json':
                with open(config_file, 'r', encoding='utf-8') as f:
                    return json.load(f)
            if config_file.suffix.lower() in ['.toml', '.tml']:
                return toml.load(config_file)
            try:
                return toml.load(config_file)
            except toml.TomlDecodeError:
                with open(config_file, 'r', encoding='utf-8') as f:
                    return json.load(f)
        except (OSError, ValueError) as e:
            logger.warning(
                "Could not load config file %s: %s", config_file, e
            )
            return {}

    @staticmethod
    def _find_default_config() -> Optional[Path]:
        """Find default configuration file."""
        possible_locations = [
            Path.cwd() / "qumem.toml",
            Path.cwd() / "qumem.json",
            Path.cwd() / ".qumem.toml",
            Path.cwd() / ".qumem.json",
            Path.home() / ".qumem" / "config.toml",
            Path.home() / ".qumem" / "config.json",
        ]

        for location in possible_locations:
            if location.exists():
                return location

        return None

    @staticmethod
    def _get_default_config_dir() -> Path:
        """Get default configuration directory."""
        config_dir = Path.home() / ".qumem"
        config_dir.mkdir(exist_ok=True)
        return config_dir

    @property
    def config_file(self) -> Optional[Path]:
        return self._config_file

    def save(self, config_file: Optional[Path] = None) -> None:
        """Save configuration to file."""
        if config_file is None:
            if self._config_file:
                config_file = self._config_file
            else:
                config_file = self._get_default_config_dir() / "config.toml"

        config_file.parent.mkdir(parents=True, exist_ok=True)

        # toml has no null
        config_data = self.model_dump(exclude_none=True)

        if config_file.suffix.lower() == '.json':
            with open(config_file, 'w', encoding='utf-8') as f:
                json.dump(config_data, f, indent=2, ensure_ascii=False)
        else:
            with open(config_file, 'w', encoding='utf-8') as f:
                toml.dump(config_data, f)

        self._config_file = config_file

    def set(self, key: str, value: Any) -> None:
        """Set configuration value."""
        if key not in type(self).model_fields:
            raise ValueError(f"Unknown configuration key: {key}")
        setattr(self, key, value)
        if self._config_file:
            self.save()

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value."""
        return getattr(self, key, default)

    def reset_to_defaults(self) -> None:
        """Reset configuration to defaults."""
        for field_name, field in type(self).model_fields.items():
            setattr(self, field_name, field.get_default(call_default_factory=True))

        if self._config_file:
            self.save()

    def worker_count(self) -> int:
        """Resolved number of worker threads."""
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)

    def numerics(self) -> Numerics:
        """Solver settings for the computation layer."""
        return Numerics(
            eigensolver=self.eigensolver,
            jacobi_tol=self.jacobi_tol,
            jacobi_max_sweeps=self.jacobi_max_sweeps,
            workers=self.worker_count(),
            oracle_cap=self.oracle_max_dim,
            allow_large=self.allow_large_oracle,
            zero_tol=self.zero_tol,
            crossover_grid=self.crossover_grid,
            validation_tol=self.validation_tol,
        )

    @field_validator('eigensolver')
    @classmethod
    def validate_eigensolver(cls, v: str) -> str:
        """Validate eigensolver name."""
        v = v.lower()
        if v not in ('jacobi', 'lapack'):
            raise ValueError(f"eigensolver must be 'jacobi' or 'lapack', got {v!r}")
        return v

    @field_validator('output_format')
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        """Validate output format."""
        v = v.lower()
        return v if v in ('csv', 'json') else 'csv'

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        v = v.upper()
        return v if v in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL') else 'WARNING'
