"""Test adapters package."""
