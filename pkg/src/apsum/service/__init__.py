"""FastAPI service exposing the library's operations over JSON."""

from .app import app

__all__ = ["app"]
