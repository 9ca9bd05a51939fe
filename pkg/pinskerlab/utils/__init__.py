"""Utilities package: configuration and random streams."""
