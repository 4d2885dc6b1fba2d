// Pure HTML-string builders.  No scoring, no aggregation: everything shown
// comes verbatim from the service's report JSON.

import type { ArticleDetail, ArticleReport, ConsensusReport } from "./api.js";
import { renderHighlightSegments } from "./highlight.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const BANNER_BLURB: Record<ConsensusReport["label"], string> = {
  Affirmative: "Most supporting articles answer yes.",
  Negative: "Most supporting articles answer no.",
  Balanced: "Yes and no answers are too close to call.",
  Neutral: "The selected articles do not allow to answer the question.",
};

function countsBar(counts: { yes: number; no: number; neutral: number }): string {
  const total = counts.yes + counts.no + counts.neutral;
  if (total === 0) {
    return '<div class="counts-bar counts-bar-empty"></div>';
  }
  const part = (n: number, kind: string) =>
    n === 0
      ? ""
      : `<span class="bar-${kind}" style="flex-grow:${n}" title="${kind}: ${n}"></span>`;
  return (
    '<div class="counts-bar">' +
    part(counts.yes, "yes") +
    part(counts.no, "no") +
    part(counts.neutral, "neutral") +
    "</div>"
  );
}

export function consensusBanner(report: ConsensusReport): string {
  const { label, counts } = report;
  const tally = `yes ${counts.yes} / no ${counts.no} / neutral ${counts.neutral}`;
  return `
<section class="banner banner-${label.toLowerCase()}" data-label="${label}">
  <h2>${label}</h2>
  <p>${escapeHtml(BANNER_BLURB[label])}</p>
  <p class="tally">${escapeHtml(tally)}</p>
  ${countsBar(counts)}
</section>`.trim();
}

function abstractMarkup(article: ArticleReport, abstract: string): string {
  const segments = renderHighlightSegments(abstract, article.highlights);
  return segments
    .map((segment) =>
      segment.highlighted
        ? `<u class="evidence">${escapeHtml(segment.text)}</u>`
        : escapeHtml(segment.text),
    )
    .join("");
}

function distributionLine(distribution: ArticleReport["distribution"]): string {
  const fmt = (value: number) => value.toFixed(2);
  return `yes ${fmt(distribution.yes)} / no ${fmt(distribution.no)} / neutral ${fmt(distribution.neutral)}`;
}

/**
 * One article card: label badge, title linking to the source, the abstract
 * with evidence underlined, and the per-article answer distribution.  When
 * the article detail fetch failed, the card still renders from the report
 * alone (the evidence text stands in for the abstract).
 */
export function articleCard(article: ArticleReport, detail: ArticleDetail | null): string {
  const title = detail?.title || article.doc_id;
  const heading = detail?.url
    ? `<a href="${escapeHtml(detail.url)}" target="_blank" rel="noopener">${escapeHtml(title)}</a>`
    : escapeHtml(title);
  const body = detail
    ? abstractMarkup(article, detail.abstract)
    : escapeHtml(article.highlights.map((h) => h.text).join(" "));
  const year = detail?.year ? ` <span class="year">(${detail.year})</span>` : "";
  return `
<article class="card card-${article.label}" data-doc-id="${escapeHtml(article.doc_id)}" data-label="${article.label}">
  <header>
    <span class="badge badge-${article.label}">${article.label}</span>
    <h3>${heading}${year}</h3>
  </header>
  <p class="abstract">${body}</p>
  <footer>${escapeHtml(distributionLine(article.distribution))}</footer>
</article>`.trim();
}

/** Plain-language explainer shown from the banner's details toggle. */
export function labelExplainer(balancedMargin = 0.2): string {
  const percent = Math.round(balancedMargin * 100);
  return [
    "Each article is read on its own and answers yes, no, or neutral.",
    "Affirmative / Negative: one answer clearly outweighs the other among non-neutral articles.",
    `Balanced: the yes/no split is within ${percent}% of even, so the evidence disagrees.`,
    "Neutral: no article took a side, so the question stays open.",
  ].join(" ");
}

export function reportView(
  report: ConsensusReport,
  details: ReadonlyMap<string, ArticleDetail | null>,
): string {
  const cards = report.articles
    .map((article) => articleCard(article, details.get(article.doc_id) ?? null))
    .join("\n");
  return `${consensusBanner(report)}
<details class="explainer"><summary>How to read this</summary><p>${escapeHtml(labelExplainer())}</p></details>
<div class="cards">
${cards}
</div>`;
}
