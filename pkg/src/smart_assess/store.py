"""Filesystem data store: profiles, content-addressed pack copies, journal.

Layout under the data directory:

    toas/<toa_id>.json            current profile state
    packs/<digest>.smartpack.json  canonical pack copies, addressed by digest
    packs/index.json               (pack_id, version) -> digests cache
    journal/...                    see journal module
    sessions/...                   service session state

Pack copies are immutable once written; the index is a derivable cache.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional

from .core import ToAProfile
from .errors import SessionConflict, UnknownId
from .journal import JournalStore, PackRef
from .questionnaire import QuestionnairePack, load_pack
from .serialize import canonical_bytes, canonical_json, profile_from_dict, sha256_hex


class DataStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.toas_dir = self.root / "toas"
        self.packs_dir = self.root / "packs"
        self.sessions_dir = self.root / "sessions"
        for directory in (self.toas_dir, self.packs_dir, self.sessions_dir):
            directory.mkdir(parents=True, exist_ok=True)
        self.journal = JournalStore(self.root / "journal")
        self._lock = threading.RLock()

    # --- profiles ---------------------------------------------------------

    def _profile_path(self, toa_id: str) -> Path:
        return self.toas_dir / f"{toa_id}.json"

    def create_profile(self, profile: ToAProfile) -> ToAProfile:
        with self._lock:
            path = self._profile_path(profile.id)
            if path.exists():
                raise SessionConflict(f"ToA {profile.id!r} already exists")
            path.write_text(canonical_json(profile.to_dict()), encoding="utf-8")
        return profile

    def update_profile(self, profile: ToAProfile) -> ToAProfile:
        with self._lock:
            path = self._profile_path(profile.id)
            if not path.exists():
                raise UnknownId("toa", profile.id)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(canonical_json(profile.to_dict()), encoding="utf-8")
            tmp.rename(path)
        return profile

    def get_profile(self, toa_id: str) -> ToAProfile:
        path = self._profile_path(toa_id)
        if not path.exists():
            raise UnknownId("toa", toa_id)
        return profile_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_profiles(self) -> list[ToAProfile]:
        return [
            profile_from_dict(json.loads(p.read_text(encoding="utf-8")))
            for p in sorted(self.toas_dir.glob("*.json"))
        ]

    # --- packs (content-addressed) ----------------------------------------

    def _index_path(self) -> Path:
        return self.packs_dir / "index.json"

    def _read_index(self) -> dict[str, list[str]]:
        path = self._index_path()
        if not path.exists():
            return {}
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return {}

    def _write_index(self, index: dict[str, list[str]]) -> None:
        tmp = self._index_path().with_suffix(".tmp")
        tmp.write_text(canonical_json(index), encoding="utf-8")
        tmp.rename(self._index_path())

    def pack_digest(self, pack: QuestionnairePack) -> str:
        return sha256_hex(canonical_bytes(pack.to_dict()))

    def add_pack(self, pack: QuestionnairePack) -> PackRef:
        """Store a canonical copy addressed by its digest; idempotent."""
        digest = self.pack_digest(pack)
        with self._lock:
            path = self.packs_dir / f"{digest}.smartpack.json"
            if not path.exists():
                path.write_text(canonical_json(pack.to_dict()), encoding="utf-8")
            index = self._read_index()
            key = f"{pack.pack_id}@{pack.version}"
            digests = index.setdefault(key, [])
            if digest not in digests:
                digests.append(digest)
                self._write_index(index)
        return PackRef(pack.pack_id, pack.version, digest)

    def get_pack_by_digest(self, digest: str) -> Optional[QuestionnairePack]:
        path = self.packs_dir / f"{digest}.smartpack.json"
        if not path.exists():
            return None
        return load_pack(path.read_bytes())

    def get_pack(self, pack_id: str, version: str,
                 digest: str = "") -> Optional[QuestionnairePack]:
        if digest:
            pack = self.get_pack_by_digest(digest)
            if pack and (pack.pack_id, pack.version) == (pack_id, version):
                return pack
            return None
        digests = self._read_index().get(f"{pack_id}@{version}", [])
        for candidate in digests:
            pack = self.get_pack_by_digest(candidate)
            if pack is not None:
                return pack
        return None

    def resolve_pack_ref(self, ref: PackRef) -> Optional[QuestionnairePack]:
        return self.get_pack(ref.pack_id, ref.version, ref.digest)

    def list_packs(self) -> list[dict]:
        out = []
        for key, digests in sorted(self._read_index().items()):
            pack_id, _, version = key.partition("@")
            for digest in digests:
                pack = self.get_pack_by_digest(digest)
                if pack is None:
                    continue
                out.append(
                    {
                        "pack_id": pack_id,
                        "version": version,
                        "digest": digest,
                        "question_count": len(pack.questions),
                    }
                )
        return out

    def pack_paths_for(self, refs: list[PackRef]) -> list[Path]:
        paths = []
        for ref in refs:
            path = self.packs_dir / f"{ref.digest}.smartpack.json"
            if path.exists() and path not in paths:
                paths.append(path)
        return paths
