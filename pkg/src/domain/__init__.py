"""Domain layer: entities, kinds and interfaces."""
