// Types mirroring the service's canonical report JSON, plus thin fetch
// wrappers around POST /v1/check and GET /v1/articles/{id}.

export type ConsensusLabel = "Affirmative" | "Negative" | "Balanced" | "Neutral";
export type ArticleLabel = "yes" | "no" | "neutral";
export type ClaimVerb = "prevent" | "cure" | "cause" | "increase";

export const CLAIM_VERBS: readonly ClaimVerb[] = ["prevent", "cure", "cause", "increase"];

export interface HighlightRange {
  start: number;
  end: number;
  text: string;
  score: number;
}

export interface ArticleReport {
  doc_id: string;
  label: ArticleLabel;
  distribution: { yes: number; no: number; neutral: number };
  highlights: HighlightRange[];
}

export interface ConsensusReport {
  claim: { agent: string; verb: ClaimVerb; disease: string; question: string };
  label: ConsensusLabel;
  counts: { yes: number; no: number; neutral: number };
  articles: ArticleReport[];
}

export interface ArticleDetail {
  id: string;
  title: string;
  abstract: string;
  url: string;
  year: number | null;
}

export interface ClaimForm {
  agent: string;
  verb: ClaimVerb;
  disease: string;
}

/** Raised for any non-2xx service response; carries the service's detail. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function errorFrom(response: Response): Promise<ServiceError> {
  try {
    const body = await response.json();
    return new ServiceError(response.status, String(body.error), String(body.detail));
  } catch {
    return new ServiceError(response.status, "HttpError", `HTTP ${response.status}`);
  }
}

export async function checkClaim(baseUrl: string, form: ClaimForm): Promise<ConsensusReport> {
  const response = await fetch(`${baseUrl}/v1/check`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ agent: form.agent, verb: form.verb, disease: form.disease }),
  });
  if (!response.ok) {
    throw await errorFrom(response);
  }
  return (await response.json()) as ConsensusReport;
}

export async function fetchArticle(baseUrl: string, docId: string): Promise<ArticleDetail> {
  const response = await fetch(`${baseUrl}/v1/articles/${encodeURIComponent(docId)}`);
  if (!response.ok) {
    throw await errorFrom(response);
  }
  return (await response.json()) as ArticleDetail;
}
