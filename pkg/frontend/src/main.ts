// Page wiring: claim form -> POST /v1/check -> rendered report.
// All rendering goes through the pure builders in view.ts.

import {
  CLAIM_VERBS,
  ServiceError,
  checkClaim,
  fetchArticle,
  type ArticleDetail,
  type ClaimForm,
  type ClaimVerb,
  type ConsensusReport,
} from "./api.js";
import { ClaimHistory } from "./history.js";
import { LatestOnly } from "./inflight.js";
import { escapeHtml, reportView } from "./view.js";

const BASE_URL = (window as { SCICHK_BASE_URL?: string }).SCICHK_BASE_URL ?? "";

const form = document.getElementById("claim-form") as HTMLFormElement;
const agentInput = document.getElementById("agent") as HTMLInputElement;
const verbSelect = document.getElementById("verb") as HTMLSelectElement;
const diseaseInput = document.getElementById("disease") as HTMLInputElement;
const submitButton = document.getElementById("submit") as HTMLButtonElement;
const statusLine = document.getElementById("status") as HTMLElement;
const reportRoot = document.getElementById("report") as HTMLElement;
const historyRoot = document.getElementById("history") as HTMLElement;

const history = new ClaimHistory();
const gate = new LatestOnly();

for (const verb of CLAIM_VERBS) {
  const option = document.createElement("option");
  option.value = verb;
  option.textContent = verb;
  verbSelect.appendChild(option);
}

function currentForm(): ClaimForm {
  return {
    agent: agentInput.value.trim(),
    verb: verbSelect.value as ClaimVerb,
    disease: diseaseInput.value.trim(),
  };
}

function refreshSubmitState(): void {
  const f = currentForm();
  submitButton.disabled = !(f.agent && f.disease);
}

agentInput.addEventListener("input", refreshSubmitState);
diseaseInput.addEventListener("input", refreshSubmitState);
refreshSubmitState();

function showStatus(text: string, kind: "progress" | "error" | "idle"): void {
  statusLine.textContent = text;
  statusLine.className = kind;
}

function renderHistory(): void {
  const entries = history.list();
  if (!entries.length) {
    historyRoot.innerHTML = "";
    return;
  }
  historyRoot.innerHTML =
    "<h2>Previous claims</h2>" +
    entries
      .map(
        (entry) =>
          `<button type="button" class="history-entry" data-question="${escapeHtml(entry.question)}">` +
          `${escapeHtml(entry.question)} <span class="badge badge-consensus">${entry.label}</span></button>`,
      )
      .join("");
}

historyRoot.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest(".history-entry");
  if (!(target instanceof HTMLElement)) {
    return;
  }
  const entry = history.get(target.dataset.question ?? "");
  if (entry) {
    agentInput.value = entry.form.agent;
    verbSelect.value = entry.form.verb;
    diseaseInput.value = entry.form.disease;
    refreshSubmitState();
    void submit();
  }
});

async function loadDetails(report: ConsensusReport): Promise<Map<string, ArticleDetail | null>> {
  const pairs = await Promise.all(
    report.articles.map(async (article): Promise<[string, ArticleDetail | null]> => {
      try {
        return [article.doc_id, await fetchArticle(BASE_URL, article.doc_id)];
      } catch (error) {
        console.warn(`article ${article.doc_id} fetch failed`, error);
        return [article.doc_id, null];
      }
    }),
  );
  return new Map(pairs);
}

async function submit(): Promise<void> {
  const f = currentForm();
  if (!f.agent || !f.disease) {
    return;
  }
  showStatus("Checking…", "progress");
  const settled = await gate.run(async () => {
    const report = await checkClaim(BASE_URL, f);
    const details = await loadDetails(report);
    return { report, details };
  });
  if (settled.stale) {
    return; // a newer submit owns the screen now
  }
  if (settled.error !== undefined) {
    const message =
      settled.error instanceof ServiceError
        ? `${settled.error.errorType}: ${settled.error.message}`
        : "Service unreachable. Is the engine running?";
    showStatus(message, "error");
    return; // form and any previous report stay untouched
  }
  const { report, details } = settled.value!;
  history.add({ form: f, label: report.label, question: report.claim.question });
  reportRoot.innerHTML = reportView(report, details);
  renderHistory();
  showStatus("", "idle");
}

form.addEventListener("submit", (event) => {
  event.preventDefault();
  void submit();
});
