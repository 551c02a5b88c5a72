"""
Results store connection

결과 저장소 엔진 / 세션 관리. The CLI opens the store once per
`convergence --db URL` run and closes it after the report is stored.
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Generator

from sqlalchemy import create_engine, event
from sqlalchemy.engine import Engine, make_url
from sqlalchemy.exc import ArgumentError, OperationalError
from sqlalchemy.orm import Session, sessionmaker

from ..utils.errors import ConfigError, ReportIOError
from .models import Base

logger = logging.getLogger(__name__)

DEFAULT_DB_URL = "sqlite:///fractal_quadrature.db"

_engine: Engine | None = None
_SessionFactory: sessionmaker | None = None


def _enable_sqlite_foreign_keys(dbapi_conn, connection_record) -> None:
    cursor = dbapi_conn.cursor()
    cursor.execute("PRAGMA foreign_keys=ON")
    cursor.close()


def _prepare_sqlite_file(db_url: str) -> bool:
    """
    SQLite 파일 URL 이면 상위 디렉터리를 만든다

    Returns:
        True if the URL is a SQLite URL
    """
    try:
        url = make_url(db_url)
    except ArgumentError as exc:
        raise ConfigError(f"Invalid results store URL '{db_url}'") from exc

    if url.get_backend_name() != "sqlite":
        return False
    if url.database and url.database != ":memory:":
        parent = Path(url.database).expanduser().parent
        try:
            parent.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ReportIOError(f"Cannot create results store directory {parent}: {exc}") from exc
    return True


def init_db(db_url: str = DEFAULT_DB_URL, echo: bool = False) -> Engine:
    """
    Open the results store and create the study tables

    A previously opened store is closed first.

    Args:
        db_url: SQLAlchemy URL (default: SQLite file in the working directory)
        echo: Enable SQL echo for debugging

    Raises:
        ConfigError: URL cannot be parsed or names an unknown dialect
        ReportIOError: store cannot be created or opened
    """
    global _engine, _SessionFactory

    close_db()
    is_sqlite = _prepare_sqlite_file(db_url)
    try:
        engine = create_engine(db_url, echo=echo)
    except (ArgumentError, ImportError) as exc:
        raise ConfigError(f"Unsupported results store URL '{db_url}': {exc}") from exc

    # cascade delete of level rows relies on foreign keys, off by default in SQLite
    if is_sqlite:
        event.listen(engine, "connect", _enable_sqlite_foreign_keys)

    try:
        Base.metadata.create_all(engine)
    except OperationalError as exc:
        engine.dispose()
        raise ReportIOError(f"Cannot open results store {db_url}: {exc.orig}") from exc

    _engine = engine
    _SessionFactory = sessionmaker(bind=engine, expire_on_commit=False)
    logger.info("Results store ready at %s", engine.url.render_as_string(hide_password=True))
    return engine


def close_db() -> None:
    """Dispose the current engine, if any"""
    global _engine, _SessionFactory

    if _engine is not None:
        _engine.dispose()
        logger.debug("Results store closed")
    _engine = None
    _SessionFactory = None


def get_engine() -> Engine:
    if _engine is None:
        raise RuntimeError("Database not initialized. Call init_db() first.")
    return _engine


def get_session() -> Session:
    """
    New session on the current store

    Raises:
        RuntimeError: If database not initialized
    """
    if _SessionFactory is None:
        raise RuntimeError("Database not initialized. Call init_db() first.")
    return _SessionFactory()


@contextmanager
def session_scope() -> Generator[Session, None, None]:
    """
    Commit on success, roll back on any exception

    Usage:
        with session_scope() as session:
            save_report(session, report)
    """
    session = get_session()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def reset_database(engine: Engine | None = None) -> None:
    """저장된 모든 study run 삭제 후 테이블 재생성"""
    engine = engine or get_engine()
    Base.metadata.drop_all(engine)
    Base.metadata.create_all(engine)
    logger.warning("Results store reset: all study runs dropped")
