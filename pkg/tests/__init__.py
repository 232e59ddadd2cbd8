"""Tests for the search engine module."""
