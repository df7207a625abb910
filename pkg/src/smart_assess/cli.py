"""Operator command line: pack validation, ToA management, assessments,
decisions, reports, audit replay, and launching the service.

Exit codes: 0 success, 1 validation or domain error, 2 usage error.
Machine output (--json) goes to stdout as canonical JSON; diagnostics go to
stderr. No command prompts unless --interactive is given.
"""

from __future__ import annotations

import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__
from .core import (
    Dependency,
    ReadinessLevel,
    SecurityCriticality,
    SoftwareType,
    ToAProfile,
    axis_label,
)
from .errors import MalformedDocument, SmartError, UnknownId
from .gating import AssessorDecision, Decision, DecisionChoice
from .questionnaire import (
    QuestionnairePack,
    REQUIRED_AXES,
    applicable_questions,
    load_pack,
    validate_pack,
)
from .report import ReportFormat, history_rows, render_history_report, render_snapshot_report
from .scoring import ResponseSet, assessment_axes
from .serialize import canonical_json, format_timestamp, response_set_from_dict
from .service.config import ServiceConfig, load_config
from .store import DataStore
from .workflow import (
    apply_assessor_decision,
    audit_toa,
    decision_payload,
    finalize_assessment,
    finalize_payload,
)


def _echo_json(payload: dict) -> None:
    # canonical_json is newline-terminated already
    click.echo(canonical_json(payload), nl=False)


def _err(message: str) -> None:
    click.echo(message, err=True)


class DomainErrorGroup(click.Group):
    """Maps domain errors to exit code 1; click keeps 2 for usage errors."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except SmartError as exc:
            _err(f"error: {exc}")
            sys.exit(1)


@click.group(cls=DomainErrorGroup)
@click.version_option(version=__version__, prog_name="smart")
@click.option("--config", "config_file", type=click.Path(path_type=Path),
              help="Config file (default ./smart.config.json when present).")
@click.option("--data-dir", type=click.Path(path_type=Path),
              help="Data directory (overrides SMART_DATA_DIR and config file).")
@click.pass_context
def main(ctx: click.Context, config_file: Path | None, data_dir: Path | None) -> None:
    """Software maturity assessments: two-dimensional readiness/quality
    scoring with gated promotion and an auditable journal."""
    ctx.ensure_object(dict)
    ctx.obj["config_file"] = config_file
    ctx.obj["data_dir"] = str(data_dir) if data_dir else None


def _config(ctx: click.Context, **overrides) -> ServiceConfig:
    return load_config(ctx.obj.get("config_file"), data_dir=ctx.obj.get("data_dir"), **overrides)


def _store(ctx: click.Context) -> DataStore:
    return DataStore(_config(ctx).data_path())


# --- pack ---------------------------------------------------------------------

@main.group()
def pack() -> None:
    """Questionnaire pack tools."""


@pack.command("validate")
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report on stdout.")
def pack_validate(path: Path, as_json: bool) -> None:
    """Parse and validate a .smartpack.json file."""
    parsed = load_pack(path.read_bytes())
    report = validate_pack(parsed)
    covered = len(parsed.covered_axes())
    if as_json:
        _echo_json({
            "ok": report.ok,
            "axes_covered": covered,
            "axes_required": len(REQUIRED_AXES),
            "pack_id": parsed.pack_id,
            "version": parsed.version,
            "question_count": len(parsed.questions),
            "diagnostics": [d.to_dict() for d in report.diagnostics],
        })
    else:
        for diagnostic in report.diagnostics:
            _err(f"{diagnostic.severity.value}: {diagnostic.message}")
        if report.ok:
            click.echo(f"OK: {covered} axes covered")
    if not report.ok:
        sys.exit(1)


# --- toa ----------------------------------------------------------------------

@main.group()
def toa() -> None:
    """Target-of-assessment profiles."""


@toa.command("new")
@click.option("--id", "toa_id", required=True, help="Unique ToA identifier.")
@click.option("--name", default="", help="Display name.")
@click.option("--purpose", required=True, help="Purpose of the technology (non-empty).")
@click.option("--environment", required=True, help="Intended environment (non-empty).")
@click.option("--software-type", type=click.Choice([v.value for v in SoftwareType]),
              required=True)
@click.option("--dependency", type=click.Choice([v.value for v in Dependency]), required=True)
@click.option("--security-criticality", type=click.Choice([v.value for v in SecurityCriticality]),
              required=True)
@click.option("--lifecycle-note", default="")
@click.option("--level", type=click.Choice([v.value for v in ReadinessLevel]), default="idea",
              help="Starting readiness level (defaults to idea).")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def toa_new(ctx, toa_id, name, purpose, environment, software_type, dependency,
            security_criticality, lifecycle_note, level, as_json) -> None:
    """Create a ToA profile."""
    profile = ToAProfile(
        id=toa_id,
        name=name,
        purpose=purpose,
        environment=environment,
        software_type=SoftwareType(software_type),
        dependency=Dependency(dependency),
        security_criticality=SecurityCriticality(security_criticality),
        lifecycle_note=lifecycle_note,
        current_level=ReadinessLevel(level),
    )
    _store(ctx).create_profile(profile)
    if as_json:
        _echo_json(profile.to_dict())
    else:
        click.echo(f"created {profile.id} at level {profile.current_level.value}")


@toa.command("list")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def toa_list(ctx, as_json) -> None:
    """List ToA profiles."""
    profiles = _store(ctx).list_profiles()
    if as_json:
        _echo_json({"toas": [p.to_dict() for p in profiles]})
        return
    if not profiles:
        click.echo("(no ToAs)")
        return
    click.echo(f"{'id':<20}{'level':<10}{'sec':<6}name")
    for p in profiles:
        click.echo(f"{p.id:<20}{p.current_level.value:<10}"
                   f"{p.security_criticality.value:<6}{p.name}")


# --- assess ---------------------------------------------------------------------

def _resolve_pack(ctx: click.Context, store: DataStore, pack_opt: str | None,
                  responses_doc: dict | None) -> QuestionnairePack:
    if pack_opt:
        path = Path(pack_opt)
        if path.exists():
            return load_pack(path.read_bytes())
        if "@" in pack_opt:
            pack_id, _, version = pack_opt.partition("@")
            found = store.get_pack(pack_id, version)
            if found is not None:
                return found
        raise UnknownId("pack", pack_opt)
    if responses_doc is not None:
        pack_id = responses_doc.get("pack_id", "")
        version = responses_doc.get("pack_version", "")
        found = store.get_pack(pack_id, version)
        if found is not None:
            return found
    config = _config(ctx)
    if config.pack:
        return load_pack(Path(config.pack).read_bytes())
    raise MalformedDocument(
        "no pack available: pass --pack, store one, or configure SMART_PACK"
    )


def _digest_evidence_input(raw: str) -> str:
    path = Path(raw)
    if path.exists() and path.is_file():
        return hashlib.sha256(path.read_bytes()).hexdigest()
    return raw


def _interactive_responses(
    pack: QuestionnairePack, profile: ToAProfile, assessor: str, draft_path: Path
) -> ResponseSet:
    draft: dict = {"responses": {}, "evidence": {}}
    if draft_path.exists():
        draft = json.loads(draft_path.read_text(encoding="utf-8"))
        _err(f"resuming draft with {len(draft.get('responses', {}))} answers from {draft_path}")

    def save_draft() -> None:
        draft_path.write_text(canonical_json(draft), encoding="utf-8")

    for axis in assessment_axes(profile):
        questions = applicable_questions(pack, profile, axis)
        for question in questions:
            if question.id in draft["responses"]:
                continue
            click.echo(f"\n[{axis_label(axis)}] {question.text}")
            if question.remediation_hint:
                click.echo(f"  (if no: {question.remediation_hint})")
            answer = click.prompt("  answer", type=click.Choice(["yes", "no", "na"]))
            entry: dict = {"answer": {"yes": "yes", "no": "no", "na": "not_applicable"}[answer],
                           "justification": "", "evidence": []}
            if answer == "na":
                entry["justification"] = click.prompt("  justification (required)",
                                                      type=str).strip()
                while not entry["justification"]:
                    entry["justification"] = click.prompt("  justification (required)",
                                                          type=str).strip()
            if answer == "yes":
                need = question.evidence_required
                kinds = ", ".join(k.value for k in question.evidence_kinds_suggested) or "any"
                while need or click.confirm("  attach evidence?", default=False):
                    eid = f"ev-{question.id}-{len(entry['evidence']) + 1}"
                    kind = click.prompt(f"  evidence kind ({kinds})", type=str,
                                        default=(question.evidence_kinds_suggested[0].value
                                                 if question.evidence_kinds_suggested
                                                 else "document"))
                    description = click.prompt("  description", type=str, default="")
                    ref = click.prompt("  file path, URL or digest", type=str)
                    draft["evidence"][eid] = {
                        "kind": kind,
                        "description": description,
                        "content_digest": _digest_evidence_input(ref),
                        "recorded_at": format_timestamp(datetime.now(timezone.utc)),
                    }
                    entry["evidence"].append(eid)
                    need = False
            draft["responses"][question.id] = entry
            save_draft()
    draft.update(
        profile_id=profile.id,
        pack_id=pack.pack_id,
        pack_version=pack.version,
        assessor=assessor,
        assessed_at=format_timestamp(datetime.now(timezone.utc)),
    )
    save_draft()
    _err(f"responses written to {draft_path}")
    return response_set_from_dict(draft)


@main.command("assess")
@click.option("--toa", "toa_id", required=True, help="ToA identifier.")
@click.option("--pack", "pack_opt", default=None,
              help="Pack file path or id@version of a stored pack.")
@click.option("--responses", "responses_file", type=click.Path(path_type=Path),
              help="Response-set JSON file (non-interactive mode).")
@click.option("--interactive", is_flag=True, help="Prompt question by question.")
@click.option("--assessor", default="", help="Assessor identity for interactive mode.")
@click.option("--draft", "draft_file", type=click.Path(path_type=Path), default=None,
              help="Draft file for interactive resume (default <toa>.draft.responses.json).")
@click.option("--follow-up-days", type=int, default=None,
              help="Override the follow-up interval for action plans.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def assess_cmd(ctx, toa_id, pack_opt, responses_file, interactive, assessor,
               draft_file, follow_up_days, as_json) -> None:
    """Run one assessment from a responses file or interactively, append the
    snapshot to the journal, and apply the resulting transition."""
    if bool(responses_file) == bool(interactive):
        raise click.UsageError("pass exactly one of --responses or --interactive")
    store = _store(ctx)
    profile = store.get_profile(toa_id)

    responses_doc = None
    if responses_file:
        try:
            responses_doc = json.loads(Path(responses_file).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"{responses_file}: {exc}") from exc
    parsed_pack = _resolve_pack(ctx, store, pack_opt, responses_doc)

    if interactive:
        draft_path = draft_file or Path(f"{toa_id}.draft.responses.json")
        response_set = _interactive_responses(parsed_pack, profile,
                                              assessor or click.prompt("assessor", type=str),
                                              Path(draft_path))
    else:
        response_set = response_set_from_dict(responses_doc)
        if response_set.profile_id != toa_id:
            raise MalformedDocument(
                f"responses file is for {response_set.profile_id!r}, not {toa_id!r}"
            )

    from datetime import timedelta

    config = _config(ctx)
    interval = timedelta(days=follow_up_days if follow_up_days else config.follow_up_days)
    outcome = finalize_assessment(store, profile, parsed_pack, response_set, interval)
    payload = finalize_payload(outcome.snapshot)
    if as_json:
        _echo_json(payload)
        return
    snapshot = outcome.snapshot
    click.echo(f"maturity:  {snapshot.vector.notation}")
    click.echo(f"decision:  {snapshot.transition.decision.value}"
               + (f" -> {snapshot.transition.advance_to.value}"
                  if snapshot.transition.advance_to else ""))
    click.echo(f"rationale: {snapshot.transition.rationale}")
    if snapshot.transition.decision is Decision.NEEDS_ASSESSOR_DECISION:
        click.echo("awaiting assessor decision: run `smart decide` with --choice hold|advance")
    if snapshot.action_plan:
        click.echo(f"action items ({len(snapshot.action_plan.items)}), "
                   f"follow up by {snapshot.action_plan.follow_up_by.isoformat()}:")
        for item in snapshot.action_plan.items:
            click.echo(f"  - [{item.question_id}] {item.remediation_hint}")
    click.echo(f"journal:   sequence {snapshot.sequence_no} appended "
               f"({snapshot.this_hash[:12]}...)")


@main.command("decide")
@click.option("--toa", "toa_id", required=True)
@click.option("--choice", type=click.Choice([c.value for c in DecisionChoice]), required=True)
@click.option("--justification", required=True)
@click.option("--assessor", default="")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def decide_cmd(ctx, toa_id, choice, justification, assessor, as_json) -> None:
    """Resolve a pending hold-or-advance decision on the latest assessment."""
    store = _store(ctx)
    decision = AssessorDecision(
        choice=DecisionChoice(choice),
        justification=justification,
        assessor=assessor,
        decided_at=datetime.now(timezone.utc),
    )
    outcome = apply_assessor_decision(store, toa_id, decision)
    if as_json:
        _echo_json(decision_payload(outcome))
        return
    click.echo(f"decision:  {choice}")
    click.echo(f"level now: {outcome.profile_after.current_level.value}")
    click.echo(f"journal:   sequence {outcome.snapshot.sequence_no} appended")


# --- report / history / audit -----------------------------------------------------

@main.command("report")
@click.option("--toa", "toa_id", required=True)
@click.option("--format", "fmt", default="plain",
              help="plain, json or html (default plain).")
@click.option("--sequence", type=int, default=None, help="Snapshot to report (default latest).")
@click.option("--history", "history_mode", is_flag=True, help="Render the progression report.")
@click.option("--plan-csv", "plan_csv", type=click.Path(path_type=Path), default=None,
              help="Export the snapshot's action plan as flat CSV and exit.")
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None,
              help="Write to a file instead of stdout.")
@click.pass_context
def report_cmd(ctx, toa_id, fmt, sequence, history_mode, plan_csv, out_file) -> None:
    """Render an assessment report from the journal."""
    store = _store(ctx)
    store.get_profile(toa_id)
    snapshots = store.journal.history(toa_id)
    if plan_csv:
        from .gating import plan_to_csv
        from .errors import NothingToRemediate

        candidates = [s for s in snapshots if s.action_plan is not None
                      and (sequence is None or s.sequence_no == sequence)]
        if not candidates:
            raise NothingToRemediate(f"no action plan recorded for {toa_id!r}")
        Path(plan_csv).write_text(plan_to_csv(candidates[-1].action_plan), encoding="utf-8")
        _err(f"wrote {plan_csv}")
        return
    report_format = ReportFormat.parse(fmt)
    if history_mode:
        body = render_history_report(snapshots, report_format)
    else:
        if not snapshots:
            raise UnknownId("toa history", toa_id)
        chosen = snapshots[-1]
        if sequence is not None:
            matches = [s for s in snapshots if s.sequence_no == sequence]
            if not matches:
                raise UnknownId("snapshot", f"{toa_id}#{sequence}")
            chosen = matches[0]
        body = render_snapshot_report(chosen, report_format, history=snapshots)
    if out_file:
        Path(out_file).write_bytes(body)
        _err(f"wrote {out_file}")
    else:
        click.echo(body.decode("utf-8"), nl=False)


@main.command("history")
@click.option("--toa", "toa_id", required=True)
@click.option("--export", "export_file", type=click.Path(path_type=Path), default=None,
              help="Export the full history as one .tar.gz archive.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def history_cmd(ctx, toa_id, export_file, as_json) -> None:
    """Show (or export) the assessment history of a ToA."""
    store = _store(ctx)
    store.get_profile(toa_id)
    snapshots = store.journal.history(toa_id)
    if export_file:
        refs = [s.pack for s in snapshots]
        store.journal.export_archive(toa_id, Path(export_file),
                                     pack_paths=store.pack_paths_for(refs))
        _err(f"exported {len(snapshots)} snapshot(s) to {export_file}")
        return
    rows = history_rows(snapshots)
    if as_json:
        _echo_json({"toa_id": toa_id, "rows": rows})
        return
    if not rows:
        click.echo("(no assessments)")
        return
    click.echo(f"{'seq':>4}  {'date':<32}{'level':<10}{'maturity':<9}decision")
    for row in rows:
        click.echo(f"{row['sequence_no']:>4}  {row['date']:<32}{row['level']:<10}"
                   f"{row['notation']:<9}{row['decision']}")


@main.command("audit")
@click.option("--toa", "toa_id", required=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def audit_cmd(ctx, toa_id, as_json) -> None:
    """Verify the hash chain and replay all stored assessments."""
    store = _store(ctx)
    store.get_profile(toa_id)
    result = audit_toa(store, toa_id)
    if as_json:
        _echo_json(result)
    else:
        chain = result["chain"]
        click.echo(f"chain:  {'ok' if chain['ok'] else 'BROKEN'} "
                   f"({chain['snapshots_checked']} snapshot(s) checked)")
        if not chain["ok"]:
            click.echo(f"        first divergence at sequence {chain['first_divergence']}: "
                       f"{chain['detail']}")
        replay = result["replay"]
        click.echo(f"replay: {'ok' if replay['ok'] else 'FAILED'}"
                   + (f" ({replay['vectors']} vector(s) reproduced)" if replay["ok"]
                      else f" ({replay['error']})"))
        click.echo(f"verdict: {result['verdict']}")
    if result["verdict"] != "clean":
        sys.exit(1)


# --- serve --------------------------------------------------------------------

@main.command("serve")
@click.option("--addr", default=None, help="host:port to bind (default from config).")
@click.option("--token", default=None, help="Bearer token; empty disables auth.")
@click.option("--pack", "pack_path", default=None, help="Default pack file to register.")
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None,
              help="Static assets for the assessor console (mounted at /ui).")
@click.pass_context
def serve_cmd(ctx, addr, token, pack_path, ui_dir) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    config = _config(ctx, addr=addr, token=token, pack=pack_path)
    if ui_dir is None:
        candidate = Path("frontend/dist")
        ui_dir = candidate if candidate.is_dir() else None
    app = create_app(config, ui_dir=ui_dir)
    _err(f"serving on http://{config.host}:{config.port} "
         f"(data: {config.data_dir}, auth: {'bearer token' if config.token else 'disabled'})")
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()
