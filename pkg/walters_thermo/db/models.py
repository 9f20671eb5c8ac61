"""
SQLAlchemy models for the run-report store.
"""
from datetime import datetime

from sqlalchemy import BigInteger, Integer, String, Text, TIMESTAMP, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column


class Base(DeclarativeBase):
    """Base class for all database models."""
    pass


class RunRecord(Base):
    """
    One emitted CLI report.

    Attributes:
        id: Auto-incrementing primary key
        command: CLI command name
        potential: Built-in name or spec path
        config_digest: SHA-256 of the canonical run configuration
        exit_code: Process exit code of the run
        report_json: Full JSON report
        created_at: Timestamp when the record was created
    """
    __tablename__ = "runs"

    id: Mapped[int] = mapped_column(
        BigInteger().with_variant(Integer, "sqlite"),
        primary_key=True,
        autoincrement=True
    )

    command: Mapped[str] = mapped_column(
        String(32),
        nullable=False,
        index=True
    )

    potential: Mapped[str] = mapped_column(
        String(255),
        nullable=False
    )

    config_digest: Mapped[str] = mapped_column(
        String(64),
        nullable=False,
        index=True
    )

    exit_code: Mapped[int] = mapped_column(
        Integer,
        nullable=False
    )

    report_json: Mapped[str] = mapped_column(
        Text,
        nullable=False
    )

    created_at: Mapped[datetime] = mapped_column(
        TIMESTAMP,
        nullable=False,
        server_default=func.current_timestamp()
    )

    def __repr__(self) -> str:
        return (
            f"<RunRecord(id={self.id}, command='{self.command}', "
            f"potential='{self.potential[:30]}', exit_code={self.exit_code})>"
        )
