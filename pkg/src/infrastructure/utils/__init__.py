"""Utility modules for infrastructure layer."""

