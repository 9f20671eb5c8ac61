"""
CRUD operations for stored run reports.
"""
from typing import Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from walters_thermo.db.models import RunRecord
from walters_thermo.logging_config import get_logger

logger = get_logger(__name__)


def save_run(
    session: Session,
    command: str,
    potential: str,
    config_digest: str,
    exit_code: int,
    report_json: str
) -> RunRecord:
    """
    Store one emitted report.

    Args:
        session: SQLAlchemy database session
        command: CLI command name
        potential: Built-in name or spec path
        config_digest: SHA-256 of the canonical run configuration
        exit_code: Exit code the run finished with
        report_json: The JSON report exactly as emitted

    Returns:
        RunRecord: The stored record, with its id assigned

    Raises:
        Exception: If database operation fails
    """
    try:
        record = RunRecord(
            command=command,
            potential=potential,
            config_digest=config_digest,
            exit_code=exit_code,
            report_json=report_json
        )
        session.add(record)
        session.flush()
        logger.info(f"Stored {command} run {record.id} for {potential}")
        return record

    except Exception as e:
        logger.error(f"Error storing {command} run for {potential}: {e}")
        raise


def get_run(session: Session, run_id: int) -> Optional[RunRecord]:
    """
    Retrieve a stored run by id.

    Args:
        session: SQLAlchemy database session
        run_id: Record id

    Returns:
        RunRecord or None: The record if found, None otherwise
    """
    try:
        return session.get(RunRecord, run_id)

    except Exception as e:
        logger.error(f"Error retrieving run {run_id}: {e}")
        raise


def list_runs(session: Session, command: Optional[str] = None, limit: int = 20) -> list[RunRecord]:
    """
    Most recent stored runs, newest first.

    Args:
        session: SQLAlchemy database session
        command: Only runs of this command, if given
        limit: Maximum number of records

    Returns:
        list[RunRecord]
    """
    try:
        query = select(RunRecord)
        if command is not None:
            query = query.where(RunRecord.command == command)
        query = query.order_by(RunRecord.created_at.desc(), RunRecord.id.desc()).limit(limit)
        return list(session.scalars(query))

    except Exception as e:
        logger.error(f"Error listing runs: {e}")
        raise


def delete_run(session: Session, run_id: int) -> bool:
    """
    Delete a stored run.

    Args:
        session: SQLAlchemy database session
        run_id: Record id

    Returns:
        bool: True if the run was deleted, False if it was not found
    """
    try:
        record = session.get(RunRecord, run_id)
        if record:
            session.delete(record)
            session.flush()
            logger.info(f"Deleted run {run_id}")
            return True
        logger.warning(f"Run {run_id} not found for deletion")
        return False

    except Exception as e:
        logger.error(f"Error deleting run {run_id}: {e}")
        raise
