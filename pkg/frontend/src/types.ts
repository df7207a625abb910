/** Payload shapes of the assessment API (canonical JSON bodies). */

export type MaturityStateToken = "negative" | "neutral" | "positive";
export type AnswerToken = "yes" | "no" | "not_applicable";
export type DecisionToken =
    | "advance"
    | "hold"
    | "remediate"
    | "needs_assessor_decision"
    | "retire"
    | "maintain";

export interface AxisRef {
    kind: "readiness" | "quality";
    level?: string;
    characteristic?: string;
    submetric?: string;
}

export interface ToAProfile {
    id: string;
    name: string;
    purpose: string;
    environment: string;
    software_type: string;
    dependency: string;
    security_criticality: string;
    lifecycle_note: string;
    current_level: string;
}

export interface EvidenceItem {
    id: string;
    kind: string;
    description: string;
    content_digest: string;
    recorded_at: string;
}

export interface ResponseBody {
    answer: AnswerToken;
    justification: string;
    evidence: string[];
}

export interface SessionQuestion {
    id: string;
    text: string;
    axis: AxisRef;
    applicability: { field: string; value: string }[];
    evidence_required: boolean;
    weight: number;
    remediation_hint: string;
    evidence_kinds_suggested: string[];
    answered: boolean;
    response: ResponseBody | null;
}

export interface AxisProgress {
    axis: AxisRef;
    answered: number;
    applicable: number;
}

export interface SessionQuestions {
    session_id: string;
    state: string;
    questions: SessionQuestion[];
    progress: AxisProgress[];
}

export interface SessionInfo {
    session_id: string;
    toa_id: string;
    state: string;
    created_by: string;
    created_at: string;
    expires_at: string;
    pack: { pack_id: string; version: string; digest: string };
    responses: Record<string, ResponseBody>;
    evidence: Record<string, EvidenceItem>;
    snapshot_sequence: number | null;
}

export interface LevelScore {
    raw_percentage: number;
    state: MaturityStateToken;
    answered: number;
    applicable: number;
}

export interface MaturityVector {
    level: string;
    notation: string;
    readiness: LevelScore;
    quality: Record<string, { state: MaturityStateToken; submetrics: Record<string, LevelScore> }>;
}

export interface Transition {
    decision: DecisionToken;
    advance_to: string | null;
    blocking_axes: AxisRef[];
    options: string[] | null;
    rationale: string;
}

export interface PlanItem {
    question_id: string;
    remediation_hint: string;
    required_evidence_kinds: string[];
    target_axis: AxisRef;
}

export interface ActionPlan {
    items: PlanItem[];
    follow_up_by: string;
    created_from: string;
}

export interface FinalizeResult {
    toa_id: string;
    notation: string;
    vector: MaturityVector;
    transition: Transition;
    action_plan: ActionPlan | null;
    snapshot: { sequence_no: number; prev_hash: string; this_hash: string };
}

export interface DecisionResult {
    toa_id: string;
    notation: string;
    choice: "hold" | "advance";
    current_level: string;
    transition: Transition;
    snapshot: { sequence_no: number; prev_hash: string; this_hash: string };
}

export interface HistoryRow {
    sequence_no: number;
    date: string;
    level: string;
    notation: string;
    decision: string;
    this_hash: string;
}

export interface SnapshotReport {
    kind: "snapshot_report";
    header: {
        toa_id: string;
        toa_name: string;
        level: string;
        notation: string;
        date: string;
        assessor: string;
        pack_id: string;
        pack_version: string;
        sequence_no: number;
    };
    axes: { axis: string; raw_percentage: number; state: MaturityStateToken }[];
    characteristics: Record<string, MaturityStateToken>;
    vector: MaturityVector;
    transition: Transition;
    assessor_decision: unknown;
    action_plan: ActionPlan | null;
    sparkline: string[];
}

export interface ActionPlanView {
    toa_id: string;
    open_items: PlanItem[];
    latest_plan: ActionPlan | null;
}

export interface PackThresholds {
    t_negative: number;
    t_positive: number;
}

export interface ApiErrorBody {
    error: string;
    message: string;
    details: Record<string, unknown>;
}

export function axisKey(axis: AxisRef): string {
    return axis.kind === "readiness"
        ? `readiness:${axis.level}`
        : `quality:${axis.characteristic}/${axis.submetric}`;
}
