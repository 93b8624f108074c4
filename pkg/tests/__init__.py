"""Tests for liemorse package."""
