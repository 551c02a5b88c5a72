"""
Database package for the convergence results store.

SQLAlchemy ORM models for storing study runs and their level rows.
"""

from .models import Base, LevelResult, StudyRun
from .repository import LevelResultRepository, StudyRunRepository, save_report
from .session import close_db, get_session, init_db, reset_database, session_scope

__all__ = [
    "Base",
    "StudyRun",
    "LevelResult",
    "StudyRunRepository",
    "LevelResultRepository",
    "save_report",
    "close_db",
    "get_session",
    "init_db",
    "reset_database",
    "session_scope",
]
