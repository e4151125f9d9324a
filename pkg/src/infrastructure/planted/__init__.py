"""Planted SBM / Gaussian-mixture generators."""
