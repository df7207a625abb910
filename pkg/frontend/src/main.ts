/** Console bootstrap: thin DOM wiring over the wizard and timeline logic. */

import { ApiClient, ApiError } from "./api.js";
import { provisionalAxes } from "./provisional.js";
import {
    decisionDialog,
    finalizeSummary,
    notationBadge,
    planBoard,
    provisionalPanel,
    questionCard,
    timelineStrip,
} from "./render.js";
import { TimelineView } from "./timeline.js";
import { AssessmentWizard, decisionValidationError } from "./wizard.js";
import type { EvidenceItem, SessionQuestion } from "./types.js";

const api = new ApiClient("", localStorage.getItem("smart_token") ?? "");

function el(id: string): HTMLElement {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
}

function flash(message: string, isError = true): void {
    const box = el("flash");
    box.textContent = message;
    box.className = isError ? "flash error" : "flash";
    box.hidden = message === "";
}

async function refreshToaList(): Promise<void> {
    const { toas } = await api.listToas();
    el("toa-list").innerHTML = toas
        .map(
            (toa) =>
                `<li><button class="toa-open" data-toa="${toa.id}">` +
                `${notationBadge(toa.current_level)} ${toa.id} — ${toa.name || toa.purpose}` +
                `</button></li>`,
        )
        .join("");
    document.querySelectorAll<HTMLButtonElement>(".toa-open").forEach((button) => {
        button.addEventListener("click", () => {
            void showToa(button.dataset.toa ?? "");
        });
    });
}

let wizard: AssessmentWizard | null = null;
let timeline: TimelineView | null = null;

async function showToa(toaId: string): Promise<void> {
    timeline = new TimelineView(api, toaId);
    await timeline.load();
    el("timeline").innerHTML = timeline.stripHtml();
    el("timeline-detail").innerHTML = timeline.detailHtml();
    el("toa-title").textContent = toaId;
    wireTimeline();
    const plan = await api.actionPlan(toaId);
    el("plan-board").innerHTML = planBoard(plan.open_items, plan.latest_plan);
    el("workspace").hidden = false;
}

function wireTimeline(): void {
    document.querySelectorAll<HTMLButtonElement>(".timeline-point").forEach((point) => {
        point.addEventListener("click", () => {
            void (async () => {
                if (!timeline) return;
                await timeline.select(Number(point.dataset.sequence));
                el("timeline").innerHTML = timeline.stripHtml();
                el("timeline-detail").innerHTML = timeline.detailHtml();
                wireTimeline();
            })();
        });
    });
}

function evidenceFromForm(): Partial<EvidenceItem>[] {
    const digest = (el("evidence-digest") as HTMLInputElement).value.trim();
    if (!digest) return [];
    return [
        {
            id: `ev-${Date.now().toString(36)}`,
            kind: (el("evidence-kind") as HTMLSelectElement).value,
            description: (el("evidence-description") as HTMLInputElement).value,
            content_digest: digest,
        },
    ];
}

function renderWizard(): void {
    if (!wizard || !wizard.questions) return;
    const { questions, progress } = wizard.questions;
    el("advisory-panel").innerHTML = provisionalPanel(
        provisionalAxes(questions, progress, wizard.thresholds),
    );
    const current = wizard.currentQuestion();
    const answeredCount = questions.filter((q) => q.answered).length;
    if (wizard.phase === "answering" && current) {
        el("question-area").innerHTML = questionCard(
            current,
            answeredCount + 1,
            questions.length,
        );
        el("answer-form").hidden = false;
        el("finalize-button").hidden = true;
    } else if (wizard.phase === "ready_to_finalize") {
        el("question-area").innerHTML =
            `<p>All ${questions.length} applicable questions answered.</p>`;
        el("answer-form").hidden = true;
        el("finalize-button").hidden = false;
    }
}

async function startWizard(): Promise<void> {
    const toaId = (el("wizard-toa") as HTMLInputElement).value.trim();
    const assessor = (el("wizard-assessor") as HTMLInputElement).value.trim() || "assessor";
    if (!toaId) {
        flash("enter a ToA id first");
        return;
    }
    try {
        wizard = await AssessmentWizard.open(api, toaId, assessor);
    } catch (error) {
        flash(error instanceof ApiError ? error.guidance() : String(error));
        return;
    }
    flash("", false);
    el("wizard-panel").hidden = false;
    if (wizard.needsDecision()) {
        showDecisionDialog();
    } else {
        renderWizard();
    }
}

async function submitAnswer(answer: "yes" | "no" | "not_applicable"): Promise<void> {
    if (!wizard) return;
    const question = wizard.currentQuestion();
    if (!question) return;
    const problem = await wizard.answer(question, {
        answer,
        justification: (el("answer-justification") as HTMLTextAreaElement).value,
        evidence: evidenceFromForm(),
    });
    if (problem) {
        flash(problem);
        return;
    }
    flash("", false);
    (el("answer-justification") as HTMLTextAreaElement).value = "";
    (el("evidence-digest") as HTMLInputElement).value = "";
    renderWizard();
}

async function finalizeWizard(): Promise<void> {
    if (!wizard) return;
    const problem = await wizard.finalize();
    if (problem) {
        flash(problem);
        return;
    }
    flash("", false);
    if (wizard.needsDecision()) {
        showDecisionDialog();
    }
    await showResult();
}

async function showResult(): Promise<void> {
    if (!wizard?.result) return;
    const report = await api.report(wizard.result.toa_id);
    el("question-area").innerHTML = finalizeSummary(wizard.result, report);
    el("answer-form").hidden = true;
    el("finalize-button").hidden = true;
    await showToa(wizard.result.toa_id);
}

function showDecisionDialog(): void {
    el("decision-area").innerHTML = decisionDialog(["hold", "advance"]);
    const textarea = document.querySelector<HTMLTextAreaElement>(".decision-justification");
    const buttons = document.querySelectorAll<HTMLButtonElement>(".decision-choice");
    textarea?.addEventListener("input", () => {
        const invalid = decisionValidationError(textarea.value) !== null;
        buttons.forEach((button) => {
            button.disabled = invalid;
        });
    });
    buttons.forEach((button) => {
        button.addEventListener("click", () => {
            void (async () => {
                if (!wizard || !textarea) return;
                const problem = await wizard.submitDecision(
                    (button.dataset.choice ?? "hold") as "hold" | "advance",
                    textarea.value,
                    (el("wizard-assessor") as HTMLInputElement).value || "assessor",
                );
                if (problem) {
                    flash(problem);
                    return;
                }
                el("decision-area").innerHTML = "";
                flash("decision recorded", false);
                await showToa(wizard.session.toa_id);
            })();
        });
    });
}

function wireStaticHandlers(): void {
    el("wizard-start").addEventListener("click", () => void startWizard());
    el("answer-yes").addEventListener("click", () => void submitAnswer("yes"));
    el("answer-no").addEventListener("click", () => void submitAnswer("no"));
    el("answer-na").addEventListener("click", () => void submitAnswer("not_applicable"));
    el("finalize-button").addEventListener("click", () => void finalizeWizard());
    el("toa-refresh").addEventListener("click", () => void refreshToaList());
}

if (typeof document !== "undefined") {
    document.addEventListener("DOMContentLoaded", () => {
        wireStaticHandlers();
        void refreshToaList();
        el("timeline").innerHTML = timelineStrip([]);
    });
}
