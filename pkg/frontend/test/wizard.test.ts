import { describe, expect, it } from "vitest";

import {
    answerValidationError,
    decisionValidationError,
    partitionQuestions,
} from "../src/wizard.js";
import type { SessionQuestion } from "../src/types.js";

function question(overrides: Partial<SessionQuestion> = {}): SessionQuestion {
    return {
        id: "q1",
        text: "q1",
        axis: { kind: "readiness", level: "idea" },
        applicability: [],
        evidence_required: false,
        weight: 1,
        remediation_hint: "",
        evidence_kinds_suggested: [],
        answered: false,
        response: null,
        ...overrides,
    };
}

describe("answerValidationError", () => {
    it("mirrors the server evidence rule", () => {
        const needy = question({ evidence_required: true });
        expect(
            answerValidationError(needy, { answer: "yes", justification: "", evidence: [] }),
        ).toMatch(/evidence required/);
        expect(
            answerValidationError(needy, {
                answer: "yes",
                justification: "",
                evidence: [{ id: "e1", kind: "document", content_digest: "abc" }],
            }),
        ).toBeNull();
        // a no answer never needs evidence
        expect(
            answerValidationError(needy, { answer: "no", justification: "", evidence: [] }),
        ).toBeNull();
    });

    it("requires justification for not-applicable", () => {
        expect(
            answerValidationError(question(), {
                answer: "not_applicable",
                justification: "  ",
                evidence: [],
            }),
        ).toMatch(/justification/);
        expect(
            answerValidationError(question(), {
                answer: "not_applicable",
                justification: "out of scope",
                evidence: [],
            }),
        ).toBeNull();
    });

    it("rejects evidence without a digest", () => {
        expect(
            answerValidationError(question(), {
                answer: "yes",
                justification: "",
                evidence: [{ id: "e1", kind: "document" }],
            }),
        ).toMatch(/digest/);
    });
});

describe("decisionValidationError", () => {
    it("justification is mandatory", () => {
        expect(decisionValidationError("")).toMatch(/mandatory/);
        expect(decisionValidationError("   ")).toMatch(/mandatory/);
        expect(decisionValidationError("lab pilot booked")).toBeNull();
    });
});

describe("partitionQuestions", () => {
    it("splits answered from unanswered preserving order", () => {
        const questions = [
            question({ id: "a" }),
            question({ id: "b", answered: true }),
            question({ id: "c" }),
        ];
        const { unanswered, answered } = partitionQuestions(questions);
        expect(unanswered.map((q) => q.id)).toEqual(["a", "c"]);
        expect(answered.map((q) => q.id)).toEqual(["b"]);
    });
});
