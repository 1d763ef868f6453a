"""Configuration: schema, defaults, loader."""
