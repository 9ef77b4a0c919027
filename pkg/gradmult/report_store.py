import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from .reports import CheckReport


class ReportStore:
    """Simple SQLite-backed store for check reports."""

    def __init__(self, db_path: str = "./data/gradmult_reports.db"):
        self.db_file = Path(db_path)
        self.db_file.parent.mkdir(parents=True, exist_ok=True)
        # Use check_same_thread=False so suite worker threads can share the connection
        self.conn = sqlite3.connect(str(self.db_file), timeout=30, check_same_thread=False)
        try:
            self.conn.execute("PRAGMA journal_mode=WAL;")
        except sqlite3.DatabaseError:
            pass
        self._init_db()

    def _init_db(self):
        cur = self.conn.cursor()
        cur.execute(
            """
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp TEXT NOT NULL,
                name TEXT NOT NULL,
                verdict TEXT NOT NULL,
                mode TEXT NOT NULL,
                instance TEXT NOT NULL,
                run_id TEXT,
                report TEXT NOT NULL
            );
            """
        )
        cur.execute("CREATE INDEX IF NOT EXISTS idx_reports_name ON reports(name);")
        cur.execute("CREATE INDEX IF NOT EXISTS idx_reports_ts ON reports(timestamp);")
        self.conn.commit()

    def save_report(self, report: CheckReport, run_id: Optional[str] = None) -> int:
        payload = report.to_dict()
        ts = datetime.utcnow().isoformat()
        cur = self.conn.cursor()
        cur.execute(
            "INSERT INTO reports (timestamp, name, verdict, mode, instance, run_id, report) VALUES (?, ?, ?, ?, ?, ?, ?)",
            (ts, report.name, report.verdict.value, report.mode,
             json.dumps(payload["instance"], sort_keys=True, ensure_ascii=False), run_id,
             json.dumps(payload, sort_keys=True, ensure_ascii=False))
        )
        self.conn.commit()
        return cur.lastrowid

    def fetch_recent(self, limit: int = 100, run_id: Optional[str] = None) -> List[Dict[str, Any]]:
        cur = self.conn.cursor()
        if run_id is None:
            cur.execute("SELECT id, timestamp, name, verdict, mode, run_id, report FROM reports ORDER BY id DESC LIMIT ?",
                        (limit,))
        else:
            cur.execute("SELECT id, timestamp, name, verdict, mode, run_id, report FROM reports WHERE run_id = ? "
                        "ORDER BY id DESC LIMIT ?", (run_id, limit))
        results = []
        for r in cur.fetchall():
            try:
                rep = json.loads(r[6])
            except json.JSONDecodeError:
                rep = {}
            results.append({
                "id": r[0],
                "timestamp": r[1],
                "name": r[2],
                "verdict": r[3],
                "mode": r[4],
                "run_id": r[5],
                "report": rep
            })
        return results

    def close(self):
        self.conn.close()
