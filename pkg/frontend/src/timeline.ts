/** Progression timeline with drill-down into stored snapshot reports. */

import { ApiClient } from "./api.js";
import type { HistoryRow, SnapshotReport } from "./types.js";
import { characteristicList, planBoard, scoreTable, timelineStrip, transitionBanner } from "./render.js";

export class TimelineView {
    rows: HistoryRow[] = [];
    selected: SnapshotReport | null = null;

    constructor(private readonly api: ApiClient, readonly toaId: string) {}

    async load(): Promise<void> {
        this.rows = (await this.api.history(this.toaId)).rows;
    }

    /** Drill into one point: fetch that snapshot's JSON report. */
    async select(sequence: number): Promise<SnapshotReport> {
        this.selected = await this.api.report(this.toaId, sequence);
        return this.selected;
    }

    stripHtml(): string {
        return timelineStrip(this.rows, this.selected?.header.sequence_no);
    }

    detailHtml(): string {
        if (!this.selected) {
            return `<p class="muted">select a point to inspect its report</p>`;
        }
        return (
            `<h3>#${this.selected.header.sequence_no} &middot; ` +
            `${this.selected.header.notation} &middot; ${this.selected.header.date}</h3>` +
            transitionBanner(this.selected.transition) +
            scoreTable(this.selected) +
            characteristicList(this.selected) +
            planBoard(this.selected.action_plan?.items ?? [], this.selected.action_plan)
        );
    }
}
