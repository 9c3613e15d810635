class ConfigError(ValueError):
    """Raised for invalid or incomplete scenario configuration."""
