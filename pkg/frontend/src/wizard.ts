/** Assessment wizard state machine.
 *
 * DOM-free so the flow is unit- and contract-testable; main.ts only wires
 * these transitions to elements. Responses are persisted through the API
 * after every answer, so a reload resumes exactly where the assessor left
 * off (the server keeps the draft).
 */

import { ApiClient, ApiError } from "./api.js";
import type {
    EvidenceItem,
    FinalizeResult,
    PackThresholds,
    SessionInfo,
    SessionQuestion,
    SessionQuestions,
} from "./types.js";

export type WizardPhase =
    | "answering"
    | "ready_to_finalize"
    | "decision"
    | "finalized"
    | "failed";

export interface AnswerDraft {
    answer: "yes" | "no" | "not_applicable";
    justification: string;
    evidence: Partial<EvidenceItem>[];
}

/** Client-side mirror of the server's response rules; the server remains the
 * enforcer, this only catches mistakes before a round trip. */
export function answerValidationError(
    question: SessionQuestion,
    draft: AnswerDraft,
): string | null {
    if (draft.answer === "yes" && question.evidence_required && draft.evidence.length === 0) {
        return "evidence required: attach at least one item for a yes answer";
    }
    if (draft.answer === "not_applicable" && draft.justification.trim() === "") {
        return "a justification is required for not-applicable answers";
    }
    for (const item of draft.evidence) {
        if (!item.content_digest) {
            return "every evidence item needs a content digest (or URL)";
        }
    }
    return null;
}

/** Mandatory-justification rule for the hold/advance dialog. */
export function decisionValidationError(justification: string): string | null {
    return justification.trim() === "" ? "a justification is mandatory" : null;
}

export function partitionQuestions(questions: SessionQuestion[]): {
    unanswered: SessionQuestion[];
    answered: SessionQuestion[];
} {
    return {
        unanswered: questions.filter((q) => !q.answered),
        answered: questions.filter((q) => q.answered),
    };
}

export class AssessmentWizard {
    phase: WizardPhase = "answering";
    session: SessionInfo;
    questions: SessionQuestions | null = null;
    thresholds: PackThresholds | null = null;
    result: FinalizeResult | null = null;
    lastError: string | null = null;

    constructor(private readonly api: ApiClient, session: SessionInfo) {
        this.session = session;
        if (session.state === "awaiting_decision") this.phase = "decision";
        if (session.state === "finalized" || session.state === "expired") {
            this.phase = "finalized";
        }
    }

    static async open(api: ApiClient, toaId: string, createdBy: string): Promise<AssessmentWizard> {
        const session = await api.openOrResumeSession(toaId, createdBy);
        const wizard = new AssessmentWizard(api, session);
        if (wizard.phase === "answering") await wizard.refresh();
        return wizard;
    }

    async refresh(): Promise<void> {
        this.questions = await this.api.getQuestions(this.session.session_id);
        if (this.thresholds === null) {
            try {
                this.thresholds = await this.api.packThresholds(
                    this.session.pack.pack_id,
                    this.session.pack.version,
                );
            } catch {
                this.thresholds = null; // preview degrades to counts only
            }
        }
        if (this.phase === "answering" && this.unanswered().length === 0) {
            this.phase = "ready_to_finalize";
        }
    }

    unanswered(): SessionQuestion[] {
        return this.questions ? partitionQuestions(this.questions.questions).unanswered : [];
    }

    currentQuestion(): SessionQuestion | null {
        return this.unanswered()[0] ?? null;
    }

    async answer(question: SessionQuestion, draft: AnswerDraft): Promise<string | null> {
        const problem = answerValidationError(question, draft);
        if (problem) {
            this.lastError = problem;
            return problem;
        }
        try {
            await this.api.putResponse(
                this.session.session_id,
                question.id,
                draft.answer,
                draft.justification,
                draft.evidence,
            );
        } catch (error) {
            this.lastError = error instanceof ApiError ? error.guidance() : String(error);
            return this.lastError;
        }
        this.lastError = null;
        await this.refresh();
        return null;
    }

    /** Finalize; blocked client-side while anything is unanswered. */
    async finalize(): Promise<string | null> {
        const open = this.unanswered();
        if (open.length > 0) {
            this.lastError = `${open.length} question(s) still unanswered`;
            return this.lastError;
        }
        try {
            this.result = await this.api.finalize(this.session.session_id);
        } catch (error) {
            this.lastError = error instanceof ApiError ? error.guidance() : String(error);
            return this.lastError;
        }
        this.lastError = null;
        this.phase =
            this.result.transition.decision === "needs_assessor_decision"
                ? "decision"
                : "finalized";
        return null;
    }

    needsDecision(): boolean {
        return this.phase === "decision";
    }

    async submitDecision(
        choice: "hold" | "advance",
        justification: string,
        assessor: string,
    ): Promise<string | null> {
        const problem = decisionValidationError(justification);
        if (problem) {
            this.lastError = problem;
            return problem;
        }
        try {
            await this.api.decide(this.session.session_id, choice, justification, assessor);
        } catch (error) {
            this.lastError = error instanceof ApiError ? error.guidance() : String(error);
            return this.lastError;
        }
        this.lastError = null;
        this.phase = "finalized";
        return null;
    }
}
