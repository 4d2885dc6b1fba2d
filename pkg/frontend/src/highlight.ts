// Splits an abstract into plain/highlighted segments from the report's
// character offsets.  The engine guarantees highlights are sorted and
// non-overlapping; the UI never re-tokenizes and never loses a byte.

export interface Segment {
  text: string;
  highlighted: boolean;
}

export interface Range {
  start: number;
  end: number;
}

function offsetsValid(abstract: string, highlights: readonly Range[]): boolean {
  let previousEnd = 0;
  for (const range of highlights) {
    if (
      !Number.isInteger(range.start) ||
      !Number.isInteger(range.end) ||
      range.start < previousEnd ||
      range.end <= range.start ||
      range.end > abstract.length
    ) {
      return false;
    }
    previousEnd = range.end;
  }
  return true;
}

/**
 * Render highlight segments for an abstract.
 *
 * Concatenating the returned segment texts always reproduces the abstract
 * exactly.  Invalid offsets (out of range, overlapping, or unsorted) fall
 * back to a single unhighlighted segment with a console warning; a bad
 * report must never crash a card.
 */
export function renderHighlightSegments(
  abstract: string,
  highlights: readonly Range[],
): Segment[] {
  if (!offsetsValid(abstract, highlights)) {
    console.warn("highlight offsets out of range; rendering without highlights", highlights);
    return abstract.length ? [{ text: abstract, highlighted: false }] : [];
  }
  const segments: Segment[] = [];
  let cursor = 0;
  for (const range of highlights) {
    if (range.start > cursor) {
      segments.push({ text: abstract.slice(cursor, range.start), highlighted: false });
    }
    segments.push({ text: abstract.slice(range.start, range.end), highlighted: true });
    cursor = range.end;
  }
  if (cursor < abstract.length) {
    segments.push({ text: abstract.slice(cursor), highlighted: false });
  }
  return segments;
}
