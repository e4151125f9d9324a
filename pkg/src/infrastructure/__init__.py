"""Infrastructure layer: concrete implementations."""

