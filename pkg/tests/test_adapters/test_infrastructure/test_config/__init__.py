"""Test package for configuration infrastructure."""
