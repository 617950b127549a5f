"""FastAPI service wrapping the engine; the CLI drives the same handlers."""
