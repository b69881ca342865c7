"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid experiment or model configuration."""


class ResourceLimitError(RuntimeError):
    """A run was refused because it exceeds the desk-scale caps."""
