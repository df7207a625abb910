"""Pydantic request models. Responses are rendered by the canonical
serializer (sorted keys, newline-terminated) so journal hashes and CLI
output stay byte-stable; request validation errors map to HTTP 400."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class ToACreateRequest(BaseModel):
    id: str
    name: str = ""
    purpose: str
    environment: str
    software_type: str
    dependency: str
    security_criticality: str
    lifecycle_note: str = ""
    current_level: str = "idea"


class SessionOpenRequest(BaseModel):
    created_by: str = ""
    pack_id: str = ""
    pack_version: str = ""
    pack_digest: str = ""


class EvidenceIn(BaseModel):
    id: str
    kind: str
    description: str = ""
    content_digest: str
    recorded_at: Optional[str] = None


class ResponseUpsertRequest(BaseModel):
    answer: str
    justification: str = ""
    evidence: list[EvidenceIn] = Field(default_factory=list)


class DecisionRequest(BaseModel):
    choice: str
    justification: str
    assessor: str = ""
