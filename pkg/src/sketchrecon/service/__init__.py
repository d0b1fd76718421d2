"""HTTP session API."""

from .app import create_app
from .store import ApiSessionRecord, SessionStore

__all__ = ["create_app", "ApiSessionRecord", "SessionStore"]
