"""Test infrastructure adapters package."""
