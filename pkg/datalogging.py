# datalogging.py
# SQLite archive for scan runs and their (eta, delta) hits
# Hits are buffered and written in batches; a failed write re-queues them

import logging
import os
import sqlite3
from collections import deque
from contextlib import closing
from datetime import datetime

log = logging.getLogger(__name__)

# ---------------- Configuration ----------------
DB_FILE = "tgrs_scans.db"
BUFFER_SIZE = 50           # Write to DB every 50 hits

# ---------------- Database Schema ----------------
SCHEMA = """
CREATE TABLE IF NOT EXISTS scan_runs (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    timestamp TEXT NOT NULL,
    field TEXT NOT NULL,
    target TEXT NOT NULL,
    n INTEGER,
    k INTEGER,
    h INTEGER,
    alpha TEXT,
    scanned INTEGER,
    hits INTEGER
);

CREATE TABLE IF NOT EXISTS scan_hits (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    run_id INTEGER NOT NULL REFERENCES scan_runs(id),
    eta TEXT NOT NULL,
    delta TEXT NOT NULL,
    path TEXT,
    brute_force TEXT
);

CREATE INDEX IF NOT EXISTS idx_hits_run ON scan_hits(run_id);
"""


# ---------------- Scan Archive ----------------
class ScanArchive:
    """Buffered writer for scan reports."""

    def __init__(self, db_path=DB_FILE, buffer_size=BUFFER_SIZE):
        self.db_path = db_path
        self.buffer_size = buffer_size
        self.buffer = deque()
        self.total_logged = 0
        self.total_flushed = 0
        self._setup_database()

    def _setup_database(self):
        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with closing(sqlite3.connect(self.db_path)) as db:
            db.executescript(SCHEMA)
            db.execute("PRAGMA journal_mode=WAL;")
            db.execute("PRAGMA synchronous=NORMAL;")
        log.debug("✓ Archive ready: %s", self.db_path)

    def start_run(self, report):
        """Insert the run header for a ScanReportModel and return its id."""
        params = report.params
        with closing(sqlite3.connect(self.db_path)) as db, db:
            cursor = db.execute(
                """
                INSERT INTO scan_runs (timestamp, field, target, n, k, h, alpha, scanned, hits)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
                """,
                (datetime.now().isoformat(), report.field_description, report.target, params.n, params.k,
                 params.h, ",".join(params.alpha), report.scanned, len(report.pairs)))
            return cursor.lastrowid

    def add(self, run_id, pair):
        self.buffer.append((run_id, pair.eta, pair.delta, pair.path, pair.brute_force))
        self.total_logged += 1

    def flush(self):
        """Write all buffered hits."""
        if not self.buffer:
            return 0

        entries_to_write = list(self.buffer)
        self.buffer.clear()

        try:
            with closing(sqlite3.connect(self.db_path)) as db, db:
                db.executemany(
                    "INSERT INTO scan_hits (run_id, eta, delta, path, brute_force) VALUES (?, ?, ?, ?, ?)",
                    entries_to_write)
            self.total_flushed += len(entries_to_write)
            return len(entries_to_write)

        except sqlite3.Error as e:
            log.error("❌ Error writing to archive: %s", e)
            # Put hits back in buffer to retry
            self.buffer.extend(entries_to_write)
            return 0

    def should_flush(self):
        return len(self.buffer) >= self.buffer_size

    def record(self, report):
        """Archive a whole scan report; returns the run id."""
        run_id = self.start_run(report)
        for pair in report.pairs:
            self.add(run_id, pair)
            if self.should_flush():
                self.flush()
        self.flush()
        log.info("✓ archived run %d (%d hits) in %s", run_id, len(report.pairs), self.db_path)
        return run_id

    def get_stats(self):
        return {
            "total_logged": self.total_logged,
            "total_flushed": self.total_flushed,
            "buffered": len(self.buffer),
        }

    def runs(self):
        """(id, field, target, scanned, hits) for every archived run."""
        with closing(sqlite3.connect(self.db_path)) as db:
            return db.execute("SELECT id, field, target, scanned, hits FROM scan_runs ORDER BY id").fetchall()

    def hits(self, run_id):
        with closing(sqlite3.connect(self.db_path)) as db:
            return db.execute("SELECT eta, delta FROM scan_hits WHERE run_id = ? ORDER BY id",
                              (run_id,)).fetchall()
