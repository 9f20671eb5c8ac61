"""create runs table

Revision ID: 001
Revises:
Create Date: 2026-10-17 00:00:00.000000

"""
from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision = '001'
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    """Create runs table."""
    op.create_table(
        'runs',
        sa.Column('id', sa.BigInteger().with_variant(sa.Integer(), 'sqlite'), autoincrement=True, nullable=False),
        sa.Column('command', sa.String(length=32), nullable=False),
        sa.Column('potential', sa.String(length=255), nullable=False),
        sa.Column('config_digest', sa.String(length=64), nullable=False),
        sa.Column('exit_code', sa.Integer(), nullable=False),
        sa.Column('report_json', sa.Text(), nullable=False),
        sa.Column(
            'created_at',
            sa.TIMESTAMP(),
            server_default=sa.text('CURRENT_TIMESTAMP'),
            nullable=False
        ),
        sa.PrimaryKeyConstraint('id'),
    )

    # Lookups by command and by configuration digest
    op.create_index('ix_runs_command', 'runs', ['command'])
    op.create_index('ix_runs_config_digest', 'runs', ['config_digest'])


def downgrade() -> None:
    """Drop runs table."""
    op.drop_index('ix_runs_config_digest', table_name='runs')
    op.drop_index('ix_runs_command', table_name='runs')
    op.drop_table('runs')
