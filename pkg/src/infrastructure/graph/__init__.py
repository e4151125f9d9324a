"""Diffusion operators and matrix norms."""
