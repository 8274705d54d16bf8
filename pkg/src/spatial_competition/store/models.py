"""Database models for the local run registry."""

from sqlalchemy import (
    JSON,
    Boolean,
    Column,
    DateTime,
    Float,
    ForeignKey,
    Integer,
    String,
    create_engine,
    func,
)
from sqlalchemy.orm import declarative_base, relationship, sessionmaker

from .. import config

Base = declarative_base()


class ExperimentRun(Base):
    """One executed experiment with the spec needed to rerun it."""

    __tablename__ = "experiment_runs"
    id = Column(Integer, primary_key=True)
    kind = Column(String, nullable=False, index=True)
    created_at = Column(DateTime(timezone=True), server_default=func.now())
    spec_json = Column(JSON, nullable=False)
    meta_json = Column(JSON, nullable=True)
    fits_json = Column(JSON, nullable=True)
    wall_clock = Column(Float, nullable=True)
    records = relationship("ResultRecord", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self) -> str:
        return f"<ExperimentRun(id={self.id}, kind='{self.kind}')>"


class ResultRecord(Base):
    """A per-seed row or, with agg set, an aggregate row of a run."""

    __tablename__ = "result_records"
    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("experiment_runs.id"), nullable=False, index=True)
    agg = Column(Boolean, nullable=False, default=False)
    payload_json = Column(JSON, nullable=False)

    run = relationship("ExperimentRun", back_populates="records")


def get_engine():
    """Creates and returns a SQLAlchemy engine, ensuring the data directory exists."""
    config.ensure_dir_exists()
    return create_engine(config.DB_URL)


def create_tables():
    """Creates all database tables defined in the models."""
    engine = get_engine()
    Base.metadata.create_all(engine)


def drop_tables():
    """Drops all database tables defined in the models."""
    engine = get_engine()
    Base.metadata.drop_all(engine)


def get_session():
    """Creates and returns a new SQLAlchemy session."""
    engine = get_engine()
    Session = sessionmaker(bind=engine)
    return Session()
