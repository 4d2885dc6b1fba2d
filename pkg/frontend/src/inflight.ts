// At most one check matters per tab: every submit supersedes the previous
// one, and a superseded response is discarded instead of clobbering the UI.

export interface Settled<T> {
  stale: boolean;
  value?: T;
  error?: unknown;
}

export class LatestOnly {
  private sequence = 0;

  /** Run `task`; the result is marked stale if a newer run started since. */
  async run<T>(task: () => Promise<T>): Promise<Settled<T>> {
    const ticket = ++this.sequence;
    try {
      const value = await task();
      return { stale: ticket !== this.sequence, value };
    } catch (error) {
      return { stale: ticket !== this.sequence, error };
    }
  }
}
