/** Client-side score preview.
 *
 * Advisory only: these numbers give the assessor live feedback while
 * answering and are always rendered with an "advisory" label. Authoritative
 * scores come exclusively from the finalize and report endpoints. */

import type {
    AxisProgress,
    MaturityStateToken,
    PackThresholds,
    SessionQuestion,
} from "./types.js";
import { axisKey } from "./types.js";

export interface ProvisionalAxis {
    axisKey: string;
    answered: number;
    applicable: number;
    /** Weighted yes-fraction over non-not-applicable answers so far, or null
     * while nothing countable is answered. */
    rawPercentage: number | null;
    state: MaturityStateToken | null;
}

export function mapStatePreview(raw: number, thresholds: PackThresholds): MaturityStateToken {
    if (raw < thresholds.t_negative) return "negative";
    if (raw >= thresholds.t_positive) return "positive";
    return "neutral";
}

export function provisionalAxes(
    questions: SessionQuestion[],
    progress: AxisProgress[],
    thresholds: PackThresholds | null,
): ProvisionalAxis[] {
    const byAxis = new Map<string, SessionQuestion[]>();
    for (const question of questions) {
        const key = axisKey(question.axis);
        const bucket = byAxis.get(key);
        if (bucket) bucket.push(question);
        else byAxis.set(key, [question]);
    }
    return progress.map((entry) => {
        const key = axisKey(entry.axis);
        let yesWeight = 0;
        let totalWeight = 0;
        for (const question of byAxis.get(key) ?? []) {
            const response = question.response;
            if (!response || response.answer === "not_applicable") continue;
            totalWeight += question.weight;
            if (response.answer === "yes") yesWeight += question.weight;
        }
        let raw: number | null = null;
        if (totalWeight > 0) {
            raw = yesWeight === totalWeight ? 100.0 : (100.0 * yesWeight) / totalWeight;
        }
        return {
            axisKey: key,
            answered: entry.answered,
            applicable: entry.applicable,
            rawPercentage: raw,
            state: raw !== null && thresholds ? mapStatePreview(raw, thresholds) : null,
        };
    });
}
