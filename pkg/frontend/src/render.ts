/** Pure HTML-string renderers.
 *
 * Authoritative numbers are rendered verbatim from API payloads and carry a
 * `data-raw` attribute with the exact value; provisional previews are
 * visually separated and labeled advisory. Keeping these functions pure
 * (strings in, strings out) lets the contract tests compare every rendered
 * number against the API without a browser. */

import type { ProvisionalAxis } from "./provisional.js";
import type {
    ActionPlan,
    FinalizeResult,
    HistoryRow,
    PlanItem,
    SessionQuestion,
    SnapshotReport,
    Transition,
} from "./types.js";
import { axisKey } from "./types.js";

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}

const STATE_SIGNS: Record<string, string> = {
    negative: "-",
    neutral: "0",
    positive: "+",
};

export function notationBadge(notation: string): string {
    return `<span class="badge" data-notation="${escapeHtml(notation)}">${escapeHtml(notation)}</span>`;
}

/** Authoritative per-axis score table from a snapshot report. */
export function scoreTable(report: SnapshotReport): string {
    const rows = report.axes
        .map(
            (axis) =>
                `<tr><td>${escapeHtml(axis.axis)}</td>` +
                `<td class="num" data-raw="${axis.raw_percentage}">${axis.raw_percentage}</td>` +
                `<td class="state-${axis.state}">${escapeHtml(axis.state)} (${STATE_SIGNS[axis.state] ?? "?"})</td></tr>`,
        )
        .join("");
    return (
        `<table class="scores"><thead><tr><th>axis</th><th>raw %</th><th>state</th></tr></thead>` +
        `<tbody>${rows}</tbody></table>`
    );
}

export function characteristicList(report: SnapshotReport): string {
    const items = Object.entries(report.characteristics)
        .map(
            ([name, state]) =>
                `<li><strong>${escapeHtml(name)}</strong>: ` +
                `<span class="state-${state}" data-characteristic="${escapeHtml(name)}">${escapeHtml(state)}</span></li>`,
        )
        .join("");
    return `<ul class="characteristics">${items}</ul>`;
}

export function transitionBanner(transition: Transition): string {
    const target = transition.advance_to ? ` &rarr; ${escapeHtml(transition.advance_to)}` : "";
    return (
        `<div class="banner banner-${transition.decision}">` +
        `<strong>${escapeHtml(transition.decision)}</strong>${target}` +
        `<p>${escapeHtml(transition.rationale)}</p></div>`
    );
}

export function finalizeSummary(result: FinalizeResult, report: SnapshotReport): string {
    return (
        `<section class="result">` +
        `<h2>${notationBadge(result.notation)} sequence ${result.snapshot.sequence_no}</h2>` +
        transitionBanner(result.transition) +
        scoreTable(report) +
        characteristicList(report) +
        planBoard(result.action_plan ? result.action_plan.items : [], result.action_plan) +
        `</section>`
    );
}

export function planBoard(items: PlanItem[], plan: ActionPlan | null = null): string {
    if (items.length === 0) {
        return `<div class="plan-board"><p class="muted">no open action items</p></div>`;
    }
    const cards = items
        .map(
            (item) =>
                `<div class="plan-card" data-question="${escapeHtml(item.question_id)}">` +
                `<code>${escapeHtml(item.question_id)}</code> ` +
                `<span class="axis">${escapeHtml(axisKey(item.target_axis))}</span>` +
                `<p>${escapeHtml(item.remediation_hint)}</p>` +
                `<p class="muted">evidence: ${escapeHtml(item.required_evidence_kinds.join(", ") || "any")}</p>` +
                `</div>`,
        )
        .join("");
    const followUp = plan
        ? `<p class="muted">follow up by ${escapeHtml(plan.follow_up_by)}</p>`
        : "";
    return `<div class="plan-board">${cards}${followUp}</div>`;
}

/** Advisory per-axis preview; never confused with authoritative scores. */
export function provisionalPanel(axes: ProvisionalAxis[]): string {
    const rows = axes
        .map((axis) => {
            const raw =
                axis.rawPercentage === null
                    ? "&mdash;"
                    : `~${axis.rawPercentage.toFixed(1)}`;
            const state = axis.state ? ` ${STATE_SIGNS[axis.state] ?? ""}` : "";
            return (
                `<tr><td>${escapeHtml(axis.axisKey)}</td>` +
                `<td>${axis.answered}/${axis.applicable}</td>` +
                `<td class="advisory-value">${raw}${state}</td></tr>`
            );
        })
        .join("");
    return (
        `<div class="advisory" data-advisory="true">` +
        `<h3>Live preview <span class="advisory-label">advisory only</span></h3>` +
        `<table><thead><tr><th>axis</th><th>answered</th><th>preview</th></tr></thead>` +
        `<tbody>${rows}</tbody></table>` +
        `<p class="advisory-label">Authoritative scores come from finalize.</p></div>`
    );
}

export function questionCard(question: SessionQuestion, position: number, total: number): string {
    const hint = question.remediation_hint
        ? `<p class="muted">if no: ${escapeHtml(question.remediation_hint)}</p>`
        : "";
    const evidence = question.evidence_required
        ? `<p class="evidence-required">evidence required for a yes answer ` +
          `(${escapeHtml(question.evidence_kinds_suggested.join(", ") || "any kind")})</p>`
        : "";
    return (
        `<div class="question-card" data-question="${escapeHtml(question.id)}">` +
        `<p class="muted">question ${position} of ${total} &middot; ${escapeHtml(axisKey(question.axis))}</p>` +
        `<h3>${escapeHtml(question.text)}</h3>${evidence}${hint}</div>`
    );
}

/** Hold/advance dialog; the confirm button stays disabled until the
 * justification is non-empty (mirrors the server's mandatory rule). */
export function decisionDialog(options: string[]): string {
    const buttons = options
        .map(
            (option) =>
                `<button class="decision-choice" data-choice="${escapeHtml(option)}" disabled>` +
                `${escapeHtml(option)}</button>`,
        )
        .join("");
    return (
        `<div class="decision-dialog" data-dialog="decision">` +
        `<h3>Assessor decision required</h3>` +
        `<p>The readiness score is neutral: hold the current level or advance.</p>` +
        `<label>Justification (mandatory)` +
        `<textarea class="decision-justification" required></textarea></label>` +
        `${buttons}</div>`
    );
}

export function timelineStrip(rows: HistoryRow[], selected?: number): string {
    if (rows.length === 0) {
        return `<div class="timeline empty"><p class="muted">no assessments yet</p></div>`;
    }
    const latest = rows[rows.length - 1]!.sequence_no;
    const points = rows
        .map((row) => {
            const classes = ["timeline-point"];
            if (row.sequence_no === latest) classes.push("latest");
            if (row.sequence_no === selected) classes.push("selected");
            return (
                `<button class="${classes.join(" ")}" data-sequence="${row.sequence_no}" ` +
                `title="${escapeHtml(row.date)} ${escapeHtml(row.decision)}">` +
                `<span class="notation">${escapeHtml(row.notation)}</span>` +
                `<span class="seq">#${row.sequence_no}</span></button>`
            );
        })
        .join("");
    return `<div class="timeline">${points}</div>`;
}
