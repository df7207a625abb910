"""Render snapshots and histories as plain text, JSON or self-contained HTML.

Rendering is pure: every number comes from the stored snapshot, dates come
from stored timestamps, and identical inputs produce identical bytes. Plain
text uses fixed column widths so goldens diff cleanly.
"""

from __future__ import annotations

import html as html_escape
from dataclasses import dataclass
from enum import Enum

from .core import QUALITY_AXES, QualityCharacteristic, axis_label
from .errors import ChainUnverified, EmptyHistory, UnsupportedFormat
from .gating import ActionPlan, PlanItem
from .journal import AssessmentSnapshot, verify_linkage, verify_snapshot_hash
from .scoring import Answer
from .serialize import canonical_bytes


class ReportFormat(Enum):
    PLAIN = "plain"
    JSON = "json"
    HTML = "html"

    @classmethod
    def parse(cls, token: str) -> "ReportFormat":
        aliases = {"plaintext": "plain", "text": "plain", "txt": "plain"}
        try:
            return cls(aliases.get(token.lower(), token.lower()))
        except ValueError as exc:
            raise UnsupportedFormat(f"unsupported report format {token!r}") from exc


_AXIS_COL = 42
_RAW_COL = 8
_STATE_COL = 10


@dataclass(frozen=True)
class _AxisRow:
    label: str
    raw: float
    state: str


def _axis_rows(snapshot: AssessmentSnapshot) -> list[_AxisRow]:
    vector = snapshot.vector
    rows = [_AxisRow(axis_label(vector.level), vector.readiness.raw_percentage,
                     vector.readiness.state.value)]
    for axis in QUALITY_AXES:
        score = vector.quality[axis.characteristic].submetric_scores[axis.submetric]
        rows.append(_AxisRow(axis_label(axis), score.raw_percentage, score.state.value))
    return rows


def _characteristic_rows(snapshot: AssessmentSnapshot) -> list[tuple[str, str]]:
    return [
        (char.value, snapshot.vector.quality[char].state.value)
        for char in QualityCharacteristic
    ]


def open_action_items(history: list[AssessmentSnapshot]) -> list[PlanItem]:
    """Plan items not yet resolved: an item closes when a later snapshot
    answers its question yes. Order follows first appearance."""
    open_items: dict[str, PlanItem] = {}
    for snapshot in history:
        for qid, response in snapshot.responses.responses.items():
            if response.answer is Answer.YES and qid in open_items:
                del open_items[qid]
        if snapshot.action_plan:
            for item in snapshot.action_plan.items:
                open_items.setdefault(item.question_id, item)
    return list(open_items.values())


def history_rows(history: list[AssessmentSnapshot]) -> list[dict]:
    rows = []
    for snapshot in history:
        decision = snapshot.transition.decision.value
        if snapshot.assessor_decision is not None:
            decision = f"{decision} (assessor: {snapshot.assessor_decision.choice.value})"
        rows.append(
            {
                "sequence_no": snapshot.sequence_no,
                "date": snapshot.responses.to_dict()["assessed_at"],
                "level": snapshot.vector.level.value,
                "notation": snapshot.vector.notation,
                "decision": decision,
                "this_hash": snapshot.this_hash,
            }
        )
    return rows


def _require_verified_snapshot(snapshot: AssessmentSnapshot) -> None:
    if not verify_snapshot_hash(snapshot):
        raise ChainUnverified(
            f"snapshot {snapshot.toa_id}#{snapshot.sequence_no} does not verify; "
            f"run chain verification first"
        )


def _require_verified_history(history: list[AssessmentSnapshot]) -> None:
    if not history:
        raise EmptyHistory("history is empty")
    divergence = verify_linkage(history)
    if divergence is not None:
        raise ChainUnverified(
            f"history does not verify (first divergence at sequence {divergence}); "
            f"run chain verification first"
        )


def _plan_lines(plan: ActionPlan | None) -> list[str]:
    if plan is None or not plan.items:
        return ["(none)"]
    lines = []
    for item in plan.items:
        kinds = ", ".join(k.value for k in item.required_evidence_kinds) or "any"
        lines.append(f"- [{item.question_id}] {axis_label(item.target_axis)}")
        lines.append(f"    fix: {item.remediation_hint or '(no hint recorded)'}")
        lines.append(f"    evidence: {kinds}")
    lines.append(f"follow up by: {plan.follow_up_by.isoformat()}")
    return lines


def snapshot_report_data(snapshot: AssessmentSnapshot,
                         sparkline: list[str] | None = None) -> dict:
    """JSON report body; information-preserving for vector, transition, plan."""
    return {
        "kind": "snapshot_report",
        "header": {
            "toa_id": snapshot.toa_id,
            "toa_name": snapshot.profile.name,
            "level": snapshot.vector.level.value,
            "notation": snapshot.vector.notation,
            "date": snapshot.responses.to_dict()["assessed_at"],
            "assessor": snapshot.responses.assessor,
            "pack_id": snapshot.pack.pack_id,
            "pack_version": snapshot.pack.version,
            "sequence_no": snapshot.sequence_no,
        },
        "axes": [
            {"axis": row.label, "raw_percentage": row.raw, "state": row.state}
            for row in _axis_rows(snapshot)
        ],
        "characteristics": dict(_characteristic_rows(snapshot)),
        "vector": snapshot.vector.to_dict(),
        "transition": snapshot.transition.to_dict(),
        "assessor_decision": (
            snapshot.assessor_decision.to_dict() if snapshot.assessor_decision else None
        ),
        "action_plan": snapshot.action_plan.to_dict() if snapshot.action_plan else None,
        "sparkline": sparkline if sparkline is not None else [snapshot.vector.notation],
    }


def _render_snapshot_plain(snapshot: AssessmentSnapshot, sparkline: list[str]) -> str:
    lines = [
        "MATURITY ASSESSMENT REPORT",
        "==========================",
        f"ToA:       {snapshot.toa_id}  {snapshot.profile.name}",
        f"Level:     {snapshot.vector.level.value}",
        f"Maturity:  {snapshot.vector.notation}",
        f"Date:      {snapshot.responses.to_dict()['assessed_at']}",
        f"Assessor:  {snapshot.responses.assessor}",
        f"Pack:      {snapshot.pack.pack_id} {snapshot.pack.version}",
        f"Sequence:  {snapshot.sequence_no}",
        "",
        "AXIS SCORES",
        f"{'axis':<{_AXIS_COL}}{'raw %':>{_RAW_COL}}  {'state':<{_STATE_COL}}",
    ]
    for row in _axis_rows(snapshot):
        lines.append(f"{row.label:<{_AXIS_COL}}{row.raw:>{_RAW_COL}.2f}  {row.state:<{_STATE_COL}}")
    lines.append("")
    lines.append("CHARACTERISTICS")
    for name, state in _characteristic_rows(snapshot):
        lines.append(f"{name:<{_AXIS_COL}}{state}")
    lines.append("")
    lines.append("TRANSITION")
    transition = snapshot.transition
    target = f" -> {transition.advance_to.value}" if transition.advance_to else ""
    lines.append(f"Decision:  {transition.decision.value}{target}")
    lines.append(f"Rationale: {transition.rationale}")
    blocking = ", ".join(axis_label(a) for a in transition.blocking_axes) or "(none)"
    lines.append(f"Blocking:  {blocking}")
    if snapshot.assessor_decision:
        d = snapshot.assessor_decision
        lines.append(
            f"Assessor:  {d.choice.value} by {d.assessor} -- {d.justification}"
        )
    lines.append("")
    lines.append("ACTION ITEMS")
    lines.extend(_plan_lines(snapshot.action_plan))
    lines.append("")
    lines.append("PROGRESSION")
    lines.append("  ".join(sparkline))
    lines.append("")
    return "\n".join(lines)


_HTML_STYLE = (
    "body{font-family:system-ui,sans-serif;margin:2rem;color:#1b1b1b}"
    "table{border-collapse:collapse;margin:0.75rem 0}"
    "td,th{border:1px solid #bbb;padding:0.3rem 0.7rem;text-align:left}"
    ".badge{display:inline-block;font-size:2.2rem;font-weight:700;"
    "padding:0.2rem 0.9rem;border-radius:0.5rem;background:#eef;border:2px solid #88a}"
    ".muted{color:#666}"
)


def _render_snapshot_html(snapshot: AssessmentSnapshot, sparkline: list[str]) -> str:
    esc = html_escape.escape
    axis_rows = "".join(
        f"<tr><td>{esc(r.label)}</td><td>{r.raw:.2f}</td><td>{esc(r.state)}</td></tr>"
        for r in _axis_rows(snapshot)
    )
    char_rows = "".join(
        f"<tr><td>{esc(name)}</td><td>{esc(state)}</td></tr>"
        for name, state in _characteristic_rows(snapshot)
    )
    transition = snapshot.transition
    target = f" &rarr; {esc(transition.advance_to.value)}" if transition.advance_to else ""
    plan_html = "<p class='muted'>(none)</p>"
    if snapshot.action_plan and snapshot.action_plan.items:
        plan_rows = "".join(
            f"<tr><td>{esc(i.question_id)}</td><td>{esc(axis_label(i.target_axis))}</td>"
            f"<td>{esc(i.remediation_hint)}</td>"
            f"<td>{esc(', '.join(k.value for k in i.required_evidence_kinds))}</td></tr>"
            for i in snapshot.action_plan.items
        )
        plan_html = (
            "<table><tr><th>question</th><th>axis</th><th>remediation</th>"
            f"<th>evidence</th></tr>{plan_rows}</table>"
            f"<p>follow up by {esc(snapshot.action_plan.follow_up_by.isoformat())}</p>"
        )
    decision_html = ""
    if snapshot.assessor_decision:
        d = snapshot.assessor_decision
        decision_html = (
            f"<p><strong>Assessor decision:</strong> {esc(d.choice.value)} "
            f"by {esc(d.assessor)} &mdash; {esc(d.justification)}</p>"
        )
    return (
        "<!DOCTYPE html><html><head><meta charset='utf-8'>"
        f"<title>{esc(snapshot.toa_id)} assessment</title>"
        f"<style>{_HTML_STYLE}</style></head><body>"
        f"<h1><span class='badge'>{esc(snapshot.vector.notation)}</span> "
        f"{esc(snapshot.profile.name)}</h1>"
        f"<p class='muted'>ToA {esc(snapshot.toa_id)} &middot; level "
        f"{esc(snapshot.vector.level.value)} &middot; sequence {snapshot.sequence_no} "
        f"&middot; {esc(snapshot.responses.to_dict()['assessed_at'])} &middot; assessor "
        f"{esc(snapshot.responses.assessor)} &middot; pack {esc(snapshot.pack.pack_id)} "
        f"{esc(snapshot.pack.version)}</p>"
        f"<h2>Axis scores</h2><table><tr><th>axis</th><th>raw %</th><th>state</th></tr>"
        f"{axis_rows}</table>"
        f"<h2>Characteristics</h2><table><tr><th>characteristic</th><th>state</th></tr>"
        f"{char_rows}</table>"
        f"<h2>Transition</h2><p>{esc(transition.decision.value)}{target}</p>"
        f"<p>{esc(transition.rationale)}</p>{decision_html}"
        f"<h2>Action items</h2>{plan_html}"
        f"<h2>Progression</h2><p>{esc('  '.join(sparkline))}</p>"
        "</body></html>"
    )


def render_snapshot_report(
    snapshot: AssessmentSnapshot,
    fmt: ReportFormat | str = ReportFormat.PLAIN,
    history: list[AssessmentSnapshot] | None = None,
) -> bytes:
    """Deterministic bytes for one snapshot. When the surrounding history is
    supplied, its notations feed the progression sparkline."""
    if isinstance(fmt, str):
        fmt = ReportFormat.parse(fmt)
    _require_verified_snapshot(snapshot)
    sparkline = (
        [s.vector.notation for s in history if s.sequence_no <= snapshot.sequence_no]
        if history
        else [snapshot.vector.notation]
    )
    if fmt is ReportFormat.JSON:
        return canonical_bytes(snapshot_report_data(snapshot, sparkline))
    if fmt is ReportFormat.PLAIN:
        return _render_snapshot_plain(snapshot, sparkline).encode("utf-8")
    if fmt is ReportFormat.HTML:
        return _render_snapshot_html(snapshot, sparkline).encode("utf-8")
    raise UnsupportedFormat(f"unsupported report format {fmt!r}")


def history_report_data(history: list[AssessmentSnapshot]) -> dict:
    return {
        "kind": "history_report",
        "toa_id": history[0].toa_id,
        "rows": history_rows(history),
        "open_items": [item.to_dict() for item in open_action_items(history)],
        "sparkline": [s.vector.notation for s in history],
    }


def render_history_report(
    history: list[AssessmentSnapshot], fmt: ReportFormat | str = ReportFormat.PLAIN
) -> bytes:
    """Chronological progression table plus action items still open."""
    if isinstance(fmt, str):
        fmt = ReportFormat.parse(fmt)
    _require_verified_history(history)
    data = history_report_data(history)
    if fmt is ReportFormat.JSON:
        return canonical_bytes(data)
    if fmt is ReportFormat.PLAIN:
        lines = [
            f"PROGRESSION OF {history[0].toa_id}",
            "=" * (15 + len(history[0].toa_id)),
            f"{'seq':>4}  {'date':<32}{'level':<10}{'maturity':<9}decision",
        ]
        for row in data["rows"]:
            lines.append(
                f"{row['sequence_no']:>4}  {row['date']:<32}{row['level']:<10}"
                f"{row['notation']:<9}{row['decision']}"
            )
        lines.append("")
        lines.append("OPEN ACTION ITEMS")
        items = open_action_items(history)
        if not items:
            lines.append("(none)")
        for item in items:
            lines.append(
                f"- [{item.question_id}] {axis_label(item.target_axis)}: "
                f"{item.remediation_hint or '(no hint recorded)'}"
            )
        lines.append("")
        lines.append("  ".join(data["sparkline"]))
        lines.append("")
        return "\n".join(lines).encode("utf-8")
    if fmt is ReportFormat.HTML:
        esc = html_escape.escape
        rows_html = "".join(
            f"<tr><td>{row['sequence_no']}</td><td>{esc(row['date'])}</td>"
            f"<td>{esc(row['level'])}</td><td>{esc(row['notation'])}</td>"
            f"<td>{esc(row['decision'])}</td></tr>"
            for row in data["rows"]
        )
        items_html = "".join(
            f"<li><code>{esc(i.question_id)}</code> {esc(axis_label(i.target_axis))}: "
            f"{esc(i.remediation_hint)}</li>"
            for i in open_action_items(history)
        ) or "<li class='muted'>(none)</li>"
        body = (
            "<!DOCTYPE html><html><head><meta charset='utf-8'>"
            f"<title>{esc(history[0].toa_id)} progression</title>"
            f"<style>{_HTML_STYLE}</style></head><body>"
            f"<h1>Progression of {esc(history[0].toa_id)}</h1>"
            f"<p>{esc('  '.join(data['sparkline']))}</p>"
            "<table><tr><th>seq</th><th>date</th><th>level</th><th>maturity</th>"
            f"<th>decision</th></tr>{rows_html}</table>"
            f"<h2>Open action items</h2><ul>{items_html}</ul>"
            "</body></html>"
        )
        return body.encode("utf-8")
    raise UnsupportedFormat(f"unsupported report format {fmt!r}")
