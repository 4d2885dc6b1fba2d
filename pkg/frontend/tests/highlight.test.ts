import { afterEach, describe, expect, it, vi } from "vitest";

import { renderHighlightSegments, type Range } from "../src/highlight.js";

// deterministic 32-bit PRNG so failures reproduce
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ALPHABET = [..."abc XYZ.?!-\n\t'\"&<>", "é", "β", "汉", "🧪"];

function randomString(rng: () => number, maxLength: number): string {
  const length = Math.floor(rng() * maxLength);
  let out = "";
  for (let i = 0; i < length; i++) {
    out += ALPHABET[Math.floor(rng() * ALPHABET.length)];
  }
  return out;
}

function randomRanges(rng: () => number, textLength: number): Range[] {
  const ranges: Range[] = [];
  let cursor = 0;
  while (cursor < textLength && rng() < 0.7) {
    const start = cursor + Math.floor(rng() * (textLength - cursor));
    const end = start + 1 + Math.floor(rng() * (textLength - start - 1 + 1));
    if (end > textLength) break;
    ranges.push({ start, end });
    cursor = end;
  }
  return ranges;
}

describe("renderHighlightSegments", () => {
  afterEach(() => {
    vi.restoreAllMocks();
  });

  it("preserves the input byte-for-byte across 500 random cases", () => {
    const rng = mulberry32(20240601);
    for (let i = 0; i < 500; i++) {
      const text = randomString(rng, 80);
      const ranges = randomRanges(rng, text.length);
      const segments = renderHighlightSegments(text, ranges);
      expect(segments.map((s) => s.text).join("")).toBe(text);
      // highlighted segments are exactly the requested ranges, in order
      const highlighted = segments.filter((s) => s.highlighted);
      expect(highlighted.map((s) => s.text)).toEqual(
        ranges.map((r) => text.slice(r.start, r.end)),
      );
      for (const segment of segments) {
        expect(segment.text).not.toBe("");
      }
    }
  });

  it("marks a full-cover highlight as one emphasized segment", () => {
    const segments = renderHighlightSegments("whole abstract", [{ start: 0, end: 14 }]);
    expect(segments).toEqual([{ text: "whole abstract", highlighted: true }]);
  });

  it("returns plain text for an empty highlight list", () => {
    expect(renderHighlightSegments("plain", [])).toEqual([{ text: "plain", highlighted: false }]);
    expect(renderHighlightSegments("", [])).toEqual([]);
  });

  it("splits two disjoint highlights into five segments", () => {
    const text = "aa BB cc DD ee";
    const segments = renderHighlightSegments(text, [
      { start: 3, end: 5 },
      { start: 9, end: 11 },
    ]);
    expect(segments.map((s) => [s.text, s.highlighted])).toEqual([
      ["aa ", false],
      ["BB", true],
      [" cc ", false],
      ["DD", true],
      [" ee", false],
    ]);
  });

  it("splits leading/trailing highlights into three segments", () => {
    const text = "AA middle ZZ";
    const segments = renderHighlightSegments(text, [
      { start: 0, end: 2 },
      { start: 10, end: 12 },
    ]);
    expect(segments).toHaveLength(3);
    expect(segments.map((s) => s.highlighted)).toEqual([true, false, true]);
  });

  it.each([
    [[{ start: 0, end: 99 }], "end past the text"],
    [[{ start: -1, end: 3 }], "negative start"],
    [[{ start: 4, end: 4 }], "empty range"],
    [[{ start: 5, end: 3 }], "inverted range"],
    [
      [
        { start: 0, end: 4 },
        { start: 2, end: 6 },
      ],
      "overlapping ranges",
    ],
    [
      [
        { start: 5, end: 7 },
        { start: 0, end: 3 },
      ],
      "unsorted ranges",
    ],
    [[{ start: 0.5, end: 3 }], "fractional offset"],
  ])("falls back to plain text and warns on %j (%s)", (ranges) => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const segments = renderHighlightSegments("0123456", ranges as Range[]);
    expect(segments).toEqual([{ text: "0123456", highlighted: false }]);
    expect(warn).toHaveBeenCalledOnce();
  });
});
