/** Typed client over the assessment API. The console performs no scoring of
 * record: every authoritative value is fetched through this module. */

import type {
    ActionPlanView,
    ApiErrorBody,
    DecisionResult,
    EvidenceItem,
    FinalizeResult,
    HistoryRow,
    PackThresholds,
    SessionInfo,
    SessionQuestions,
    SnapshotReport,
    ToAProfile,
} from "./types.js";

export class ApiError extends Error {
    readonly status: number;
    readonly code: string;
    readonly details: Record<string, unknown>;

    constructor(status: number, body: ApiErrorBody | null, fallback: string) {
        super(body?.message ?? fallback);
        this.status = status;
        this.code = body?.error ?? "unknown";
        this.details = body?.details ?? {};
    }

    /** Human guidance for the common workflow errors. */
    guidance(): string {
        switch (this.code) {
            case "evidence_missing":
                return "This question requires evidence for a yes answer; attach at least one item.";
            case "session_conflict":
                return "Another session is open for this ToA; resume it instead.";
            case "assessment_precondition":
                return "The assessment is not ready to finalize; answer the remaining questions.";
            case "empty_justification":
                return "A justification is mandatory for this action.";
            default:
                return this.message;
        }
    }
}

export class ApiClient {
    constructor(
        private readonly baseUrl: string = "",
        private readonly token: string = "",
    ) {}

    private headers(json: boolean): Record<string, string> {
        const headers: Record<string, string> = {};
        if (json) headers["Content-Type"] = "application/json";
        if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
        return headers;
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const response = await fetch(this.baseUrl + path, {
            method,
            headers: this.headers(body !== undefined),
            body: body !== undefined ? JSON.stringify(body) : undefined,
        });
        if (!response.ok) {
            let parsed: ApiErrorBody | null = null;
            try {
                parsed = (await response.json()) as ApiErrorBody;
            } catch {
                parsed = null;
            }
            throw new ApiError(response.status, parsed, `${method} ${path} -> ${response.status}`);
        }
        return (await response.json()) as T;
    }

    listToas(): Promise<{ toas: ToAProfile[] }> {
        return this.request("GET", "/toas");
    }

    getToa(id: string): Promise<ToAProfile> {
        return this.request("GET", `/toas/${id}`);
    }

    createToa(profile: Record<string, string>): Promise<ToAProfile> {
        return this.request("POST", "/toas", profile);
    }

    /** Opens a session; on a 409 conflict resumes the already-open one. */
    async openOrResumeSession(toaId: string, createdBy: string): Promise<SessionInfo> {
        try {
            return await this.request<SessionInfo>("POST", `/toas/${toaId}/sessions`, {
                created_by: createdBy,
            });
        } catch (error) {
            if (error instanceof ApiError && error.status === 409) {
                const existing = error.details["open_session_id"];
                if (typeof existing === "string" && existing) {
                    return this.getSession(existing);
                }
            }
            throw error;
        }
    }

    getSession(sessionId: string): Promise<SessionInfo> {
        return this.request("GET", `/sessions/${sessionId}`);
    }

    getQuestions(sessionId: string): Promise<SessionQuestions> {
        return this.request("GET", `/sessions/${sessionId}/questions`);
    }

    putResponse(
        sessionId: string,
        questionId: string,
        answer: string,
        justification: string,
        evidence: Partial<EvidenceItem>[],
    ): Promise<unknown> {
        return this.request("PUT", `/sessions/${sessionId}/responses/${questionId}`, {
            answer,
            justification,
            evidence,
        });
    }

    finalize(sessionId: string): Promise<FinalizeResult> {
        return this.request("POST", `/sessions/${sessionId}/finalize`);
    }

    decide(sessionId: string, choice: string, justification: string, assessor: string):
        Promise<DecisionResult> {
        return this.request("POST", `/sessions/${sessionId}/decision`, {
            choice,
            justification,
            assessor,
        });
    }

    history(toaId: string): Promise<{ toa_id: string; rows: HistoryRow[] }> {
        return this.request("GET", `/toas/${toaId}/history`);
    }

    report(toaId: string, sequence?: number): Promise<SnapshotReport> {
        const suffix = sequence === undefined ? "" : `&sequence=${sequence}`;
        return this.request("GET", `/toas/${toaId}/report?format=json${suffix}`);
    }

    actionPlan(toaId: string): Promise<ActionPlanView> {
        return this.request("GET", `/toas/${toaId}/action-plan`);
    }

    async packThresholds(packId: string, version: string): Promise<PackThresholds> {
        const pack = await this.request<{ thresholds: PackThresholds }>(
            "GET",
            `/packs/${packId}/${version}`,
        );
        return pack.thresholds;
    }
}
