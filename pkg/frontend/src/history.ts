// Session-local claim history: lets the user revisit and tweak prior claims.
// Nothing is persisted server-side; the service is stateless by design.

import type { ClaimForm, ConsensusLabel } from "./api.js";

export interface HistoryEntry {
  form: ClaimForm;
  label: ConsensusLabel;
  question: string;
}

const LIMIT = 20;

export class ClaimHistory {
  private entries: HistoryEntry[] = [];

  /** Most recent first; re-submitting a claim moves it to the front. */
  add(entry: HistoryEntry): void {
    this.entries = this.entries.filter((e) => e.question !== entry.question);
    this.entries.unshift(entry);
    if (this.entries.length > LIMIT) {
      this.entries.length = LIMIT;
    }
  }

  list(): readonly HistoryEntry[] {
    return this.entries;
  }

  get(question: string): HistoryEntry | undefined {
    return this.entries.find((e) => e.question === question);
  }
}
