"""File-backed document store: one bank document, one document per learner,
an append-only run log, and the credential table, all under a data directory.

Writes go through a temp file and os.replace so a crash never leaves a
half-written document. The store itself does no locking; the service layer
serializes writers.
"""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterator, Tuple

from .bank import QuestionBank
from .bankio import bank_from_document, bank_to_document
from .errors import ParseError
from .profiles import LearnerProfile, profile_from_document, profile_to_document


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _dump(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


class DocumentStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "profiles").mkdir(exist_ok=True)

    # --- bank ---------------------------------------------------------

    @property
    def bank_path(self) -> Path:
        return self.root / "bank.json"

    def load_bank(self) -> QuestionBank:
        if not self.bank_path.exists():
            return QuestionBank()
        try:
            doc = json.loads(self.bank_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{self.bank_path}: invalid JSON at line {exc.lineno}", line=exc.lineno)
        return bank_from_document(doc)

    def save_bank(self, bank: QuestionBank) -> None:
        _write_atomic(self.bank_path, _dump(bank_to_document(bank)))

    # --- profiles -----------------------------------------------------

    def _profile_path(self, learner_id: str) -> Path:
        # learner ids come from the credential table, so they are filesystem-safe
        return self.root / "profiles" / f"{learner_id}.json"

    def load_profile(self, learner_id: str) -> LearnerProfile | None:
        path = self._profile_path(learner_id)
        if not path.exists():
            return None
        return profile_from_document(json.loads(path.read_text(encoding="utf-8")))

    def save_profile(self, profile: LearnerProfile) -> None:
        _write_atomic(self._profile_path(profile.learner_id), _dump(profile_to_document(profile)))

    def profile_store_fingerprint(self) -> Tuple[Tuple[str, bytes], ...]:
        """Byte-level snapshot of every profile document, for no-write audits."""
        directory = self.root / "profiles"
        return tuple(
            (p.name, p.read_bytes()) for p in sorted(directory.glob("*.json"))
        )

    # --- run log ------------------------------------------------------

    @property
    def run_log_path(self) -> Path:
        return self.root / "sessions.log"

    def append_run(self, taker_id: str, timestamp: str, session_id: str) -> None:
        line = json.dumps(
            {"taker": taker_id, "timestamp": timestamp, "session": session_id},
            ensure_ascii=False,
            sort_keys=True,
        )
        with self.run_log_path.open("a", encoding="utf-8") as handle:
            handle.write(line + "\n")

    def run_events(self) -> Iterator[Tuple[str, str]]:
        if not self.run_log_path.exists():
            return
        with self.run_log_path.open(encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                yield entry["taker"], entry["timestamp"]

    # --- users --------------------------------------------------------

    @property
    def users_path(self) -> Path:
        return self.root / "users.json"

    def load_users(self) -> dict:
        if not self.users_path.exists():
            return {}
        return json.loads(self.users_path.read_text(encoding="utf-8"))

    def save_users(self, users: dict) -> None:
        _write_atomic(self.users_path, _dump(users))
