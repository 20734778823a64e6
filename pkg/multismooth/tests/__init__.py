"""Tests for multismooth."""
