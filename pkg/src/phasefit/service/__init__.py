"""HTTP service wrapping the core package (see app.py for endpoints)."""

from .app import app, run_compare, run_phi, run_search, run_shifts

__all__ = ["app", "run_compare", "run_phi", "run_search", "run_shifts"]
