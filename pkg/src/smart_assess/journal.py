"""Append-only, hash-chained journal of assessment snapshots.

On-disk layout (all records canonical JSON, newline-terminated):

    journal/
      store.json                   header: digest algorithm + format version
      <toa_id>/
        00000001.json              snapshot, zero-padded sequence number
        00000002.json
        head.json                  cache of (sequence_no, this_hash)
        .lock                      advisory lock taken while appending

``this_hash`` is the sha256 of the snapshot's canonical serialization
(without the ``this_hash`` field) concatenated with the previous snapshot's
hash; the first snapshot chains from the zero digest. Snapshot files are
never rewritten; the head file is a derivable cache, not a record.
"""

from __future__ import annotations

import json
import tarfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from filelock import FileLock

from .core import MaturityVector, ToAProfile
from .errors import (
    DuplicateSequence,
    HashChainMismatch,
    MalformedDocument,
    PackUnresolvable,
    ReplayDivergence,
    StorageFailure,
    UnknownId,
)
from .questionnaire import QuestionnairePack
from .scoring import ResponseSet, assess
from .gating import ActionPlan, AssessorDecision, TransitionResult
from .serialize import (
    ZERO_DIGEST,
    DIGEST_ALGORITHM,
    canonical_bytes,
    canonical_json,
    plan_from_dict,
    profile_from_dict,
    response_set_from_dict,
    sha256_hex,
    transition_from_dict,
    vector_from_dict,
    assessor_decision_from_dict,
)

STORE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class PackRef:
    pack_id: str
    version: str
    digest: str

    def to_dict(self) -> dict:
        return {"pack_id": self.pack_id, "version": self.version, "digest": self.digest}


@dataclass(frozen=True)
class AssessmentSnapshot:
    """Immutable record of one assessment (or one assessor decision that
    supersedes a pending assessment)."""

    sequence_no: int
    toa_id: str
    pack: PackRef
    profile: ToAProfile
    responses: ResponseSet
    vector: MaturityVector
    transition: TransitionResult
    assessor_decision: Optional[AssessorDecision]
    action_plan: Optional[ActionPlan]
    prev_hash: str
    this_hash: str

    def payload_dict(self) -> dict:
        return {
            "sequence_no": self.sequence_no,
            "toa_id": self.toa_id,
            "pack": self.pack.to_dict(),
            "profile": self.profile.to_dict(),
            "responses": self.responses.to_dict(),
            "vector": self.vector.to_dict(),
            "transition": self.transition.to_dict(),
            "assessor_decision": (
                self.assessor_decision.to_dict() if self.assessor_decision else None
            ),
            "action_plan": self.action_plan.to_dict() if self.action_plan else None,
            "prev_hash": self.prev_hash,
        }

    def to_dict(self) -> dict:
        data = self.payload_dict()
        data["this_hash"] = self.this_hash
        return data


def compute_snapshot_hash(payload: dict, prev_hash: str) -> str:
    return sha256_hex(canonical_bytes(payload) + prev_hash.encode("ascii"))


def build_snapshot(
    sequence_no: int,
    toa_id: str,
    pack: PackRef,
    profile: ToAProfile,
    responses: ResponseSet,
    vector: MaturityVector,
    transition: TransitionResult,
    prev_hash: str,
    assessor_decision: Optional[AssessorDecision] = None,
    action_plan: Optional[ActionPlan] = None,
) -> AssessmentSnapshot:
    snapshot = AssessmentSnapshot(
        sequence_no=sequence_no,
        toa_id=toa_id,
        pack=pack,
        profile=profile,
        responses=responses,
        vector=vector,
        transition=transition,
        assessor_decision=assessor_decision,
        action_plan=action_plan,
        prev_hash=prev_hash,
        this_hash="",
    )
    from dataclasses import replace

    return replace(snapshot, this_hash=compute_snapshot_hash(snapshot.payload_dict(), prev_hash))


def snapshot_from_dict(data: dict) -> AssessmentSnapshot:
    pack_raw = data["pack"]
    decision_raw = data.get("assessor_decision")
    plan_raw = data.get("action_plan")
    return AssessmentSnapshot(
        sequence_no=int(data["sequence_no"]),
        toa_id=data["toa_id"],
        pack=PackRef(pack_raw["pack_id"], pack_raw["version"], pack_raw["digest"]),
        profile=profile_from_dict(data["profile"]),
        responses=response_set_from_dict(data["responses"]),
        vector=vector_from_dict(data["vector"]),
        transition=transition_from_dict(data["transition"]),
        assessor_decision=assessor_decision_from_dict(decision_raw) if decision_raw else None,
        action_plan=plan_from_dict(plan_raw) if plan_raw else None,
        prev_hash=data["prev_hash"],
        this_hash=data["this_hash"],
    )


def verify_snapshot_hash(snapshot: AssessmentSnapshot) -> bool:
    return compute_snapshot_hash(snapshot.payload_dict(), snapshot.prev_hash) == snapshot.this_hash


def verify_linkage(history: list[AssessmentSnapshot]) -> Optional[int]:
    """First sequence number at which hashes or linkage break, or None."""
    prev = ZERO_DIGEST
    for i, snapshot in enumerate(history, start=1):
        if snapshot.sequence_no != i or snapshot.prev_hash != prev:
            return i
        if not verify_snapshot_hash(snapshot):
            return i
        prev = snapshot.this_hash
    return None


@dataclass(frozen=True)
class VerificationReport:
    toa_id: str
    snapshots_checked: int
    ok: bool
    first_divergence: Optional[int]
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "toa_id": self.toa_id,
            "snapshots_checked": self.snapshots_checked,
            "ok": self.ok,
            "first_divergence": self.first_divergence,
            "detail": self.detail,
        }


PackResolver = Callable[[PackRef], Optional[QuestionnairePack]]


class JournalStore:
    """Filesystem journal; single writer per ToA via an advisory lock."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        header = self.root / "store.json"
        if not header.exists():
            header.write_text(
                canonical_json(
                    {"digest_algorithm": DIGEST_ALGORITHM, "format_version": STORE_FORMAT_VERSION}
                ),
                encoding="utf-8",
            )

    def toa_dir(self, toa_id: str) -> Path:
        return self.root / toa_id

    def _snapshot_path(self, toa_id: str, sequence_no: int) -> Path:
        return self.toa_dir(toa_id) / f"{sequence_no:08d}.json"

    def _snapshot_files(self, toa_id: str) -> list[Path]:
        directory = self.toa_dir(toa_id)
        if not directory.is_dir():
            return []
        return sorted(p for p in directory.iterdir() if p.suffix == ".json" and p.stem.isdigit())

    def head(self, toa_id: str) -> tuple[int, str]:
        """(sequence_no, this_hash) of the newest snapshot; (0, zero digest)
        for an empty history. Falls back to scanning when the cache is stale."""
        head_file = self.toa_dir(toa_id) / "head.json"
        files = self._snapshot_files(toa_id)
        if not files:
            return 0, ZERO_DIGEST
        if head_file.exists():
            try:
                cached = json.loads(head_file.read_text(encoding="utf-8"))
                if cached.get("sequence_no") == len(files):
                    return int(cached["sequence_no"]), str(cached["this_hash"])
            except (json.JSONDecodeError, KeyError, ValueError):
                pass
        last = json.loads(files[-1].read_text(encoding="utf-8"))
        return int(last["sequence_no"]), str(last["this_hash"])

    def append(self, snapshot: AssessmentSnapshot) -> int:
        directory = self.toa_dir(snapshot.toa_id)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            with FileLock(str(directory / ".lock")):
                head_seq, head_hash = self.head(snapshot.toa_id)
                if snapshot.prev_hash != head_hash:
                    raise HashChainMismatch(
                        f"snapshot prev_hash does not match the current head of "
                        f"{snapshot.toa_id!r} (sequence {head_seq})"
                    )
                if snapshot.sequence_no != head_seq + 1:
                    raise DuplicateSequence(
                        f"expected sequence {head_seq + 1}, got {snapshot.sequence_no}"
                    )
                if not verify_snapshot_hash(snapshot):
                    raise HashChainMismatch("snapshot hash does not verify against its content")
                path = self._snapshot_path(snapshot.toa_id, snapshot.sequence_no)
                if path.exists():
                    raise DuplicateSequence(f"snapshot file {path.name} already exists")
                tmp = path.with_suffix(".tmp")
                tmp.write_text(canonical_json(snapshot.to_dict()), encoding="utf-8")
                tmp.rename(path)
                head_file = directory / "head.json"
                head_tmp = head_file.with_suffix(".tmp")
                head_tmp.write_text(
                    canonical_json(
                        {"sequence_no": snapshot.sequence_no, "this_hash": snapshot.this_hash}
                    ),
                    encoding="utf-8",
                )
                head_tmp.rename(head_file)
        except OSError as exc:
            raise StorageFailure(f"journal append failed: {exc}") from exc
        return snapshot.sequence_no

    def read(self, toa_id: str, sequence_no: int) -> AssessmentSnapshot:
        path = self._snapshot_path(toa_id, sequence_no)
        if not path.exists():
            raise UnknownId("snapshot", f"{toa_id}#{sequence_no}")
        try:
            return snapshot_from_dict(json.loads(path.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise MalformedDocument(f"snapshot {path.name}: {exc}") from exc

    def history(self, toa_id: str) -> list[AssessmentSnapshot]:
        return [
            self.read(toa_id, int(path.stem)) for path in self._snapshot_files(toa_id)
        ]

    def verify(self, toa_id: str) -> VerificationReport:
        """Recompute every digest and re-serialize every record byte-exactly;
        report the first divergence."""
        files = self._snapshot_files(toa_id)
        prev = ZERO_DIGEST
        for expected_seq, path in enumerate(files, start=1):
            raw = path.read_bytes()
            try:
                data = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, f"unparseable record: {exc}"
                )
            if canonical_bytes(data) != raw:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, "record is not canonical JSON"
                )
            stored_hash = data.get("this_hash", "")
            payload = {k: v for k, v in data.items() if k != "this_hash"}
            if data.get("sequence_no") != expected_seq:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, "sequence number mismatch"
                )
            if data.get("toa_id") != toa_id:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, "record belongs to another ToA"
                )
            if data.get("prev_hash") != prev:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, "previous-hash link broken"
                )
            if compute_snapshot_hash(payload, prev) != stored_hash:
                return VerificationReport(
                    toa_id, len(files), False, expected_seq, "record digest does not verify"
                )
            prev = stored_hash
        return VerificationReport(toa_id, len(files), True, None)

    def replay(self, toa_id: str, pack_resolver: PackResolver) -> list[MaturityVector]:
        """Re-run scoring over every stored response set; stored vectors must
        match the recomputation exactly."""
        vectors: list[MaturityVector] = []
        for snapshot in self.history(toa_id):
            pack = pack_resolver(snapshot.pack)
            if pack is None:
                raise PackUnresolvable(snapshot.pack.pack_id, snapshot.pack.version)
            recomputed = assess(pack, snapshot.profile, snapshot.responses)
            if recomputed != snapshot.vector:
                raise ReplayDivergence(snapshot.sequence_no)
            vectors.append(recomputed)
        return vectors

    def export_archive(self, toa_id: str, out_path: Path,
                       pack_paths: list[Path] | None = None) -> Path:
        """Bundle one ToA's full history (plus referenced pack copies) into a
        single gzip tar archive."""
        files = self._snapshot_files(toa_id)
        if not files:
            raise UnknownId("toa history", toa_id)
        out_path = Path(out_path)
        with tarfile.open(out_path, "w:gz") as tar:
            tar.add(self.root / "store.json", arcname="journal/store.json")
            for path in files:
                tar.add(path, arcname=f"journal/{toa_id}/{path.name}")
            for pack_path in pack_paths or []:
                tar.add(pack_path, arcname=f"packs/{pack_path.name}")
        return out_path
