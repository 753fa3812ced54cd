/**
 * HTML renderers for the dashboard, as pure functions of service payloads.
 *
 * Nothing here computes a recommendation: actions, evidence displays and
 * elimination flags come straight from the server objects. The only local
 * arithmetic is presentation geometry (the evidence gauge scale and dose
 * bar widths).
 */

import { gaugeLayout } from "./gauge";
import type {
  DesignPayload,
  HistoryEntry,
  Recommendation,
  TrialSnapshot,
  WhatIfResponse,
} from "./types";

export function escapeHtml(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const pct = (value: number): string => `${(100 * value).toFixed(1)}%`;

export function designSummary(design: DesignPayload, phi: number): string {
  const parts = [`target rate ${phi}`];
  if (design.k1 !== undefined && design.k2 !== undefined) {
    parts.push(`escalate at evidence ${design.k1}`, `de-escalate at 1/${design.k2}`);
  }
  if (design.ei_lower !== undefined && design.ei_upper !== undefined) {
    parts.push(`stay interval (${design.ei_lower}, ${design.ei_upper})`);
  }
  return `<span class="design-summary">${escapeHtml(design.kind)}: ${escapeHtml(
    parts.join(", "),
  )}</span>`;
}

export function renderSetupForm(errors: string[] = []): string {
  const banner = errors.length
    ? `<div class="banner error" data-role="setup-errors"><ul>${errors
        .map((e) => `<li>${escapeHtml(e)}</li>`)
        .join("")}</ul></div>`
    : "";
  return `
<form id="setup-form" class="card">
  <h2>New trial</h2>
  ${banner}
  <label>Design
    <select name="kind">
      <option value="glr-sd" selected>likelihood rule (single dose)</option>
      <option value="glr-iso">likelihood rule (joint, monotone)</option>
      <option value="boin">BOIN</option>
      <option value="teqr">TEQR</option>
      <option value="mtpi">mTPI</option>
      <option value="i3plus3">i3+3</option>
    </select>
  </label>
  <label>Dose levels <input name="numDoses" type="number" min="1" step="1" value="6"></label>
  <label>Target DLT rate <input name="phi" type="number" min="0" max="1" step="0.01" value="0.25"></label>
  <label class="cutoff">Escalation cutoff k1 <input name="k1" type="number" min="1" step="0.01" value="1.5"></label>
  <label class="cutoff">De-escalation cutoff k2 <input name="k2" type="number" min="1" step="0.01" value="1.05"></label>
  <button type="submit">Start trial</button>
</form>`;
}

export function renderDoseBars(snapshot: TrialSnapshot): string {
  const rows = snapshot.per_dose
    .map((d) => {
      const eliminated =
        snapshot.eliminated_at_or_above !== null &&
        d.dose >= snapshot.eliminated_at_or_above;
      const classes = [
        "dose-row",
        d.dose === snapshot.current_dose && !snapshot.stopped ? "current" : "",
        eliminated ? "eliminated" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const observed = d.observed_rate === null ? "" : pct(d.observed_rate);
      const fitted = d.fitted_rate === null ? "" : pct(d.fitted_rate);
      const width = d.fitted_rate === null ? 0 : Math.round(100 * d.fitted_rate);
      return `
  <tr class="${classes}" data-dose="${d.dose}">
    <td>dose ${d.dose}${eliminated ? " &#10060;" : ""}</td>
    <td>${d.x}/${d.n}</td>
    <td>${observed}</td>
    <td>${fitted}</td>
    <td><div class="bar"><div class="fill" style="width:${width}%"></div></div></td>
  </tr>`;
    })
    .join("");
  return `
<table class="dose-table" data-role="dose-bars">
  <thead><tr><th>dose</th><th>DLT/treated</th><th>observed</th><th>monotone fit</th><th></th></tr></thead>
  <tbody>${rows}</tbody>
</table>`;
}

export function renderGauge(rec: Recommendation, k1: number, k2: number): string {
  const layout = gaugeLayout(rec.log_glr, k1, k2);
  const pos = (v: number): string => `${(100 * v).toFixed(2)}%`;
  return `
<div class="gauge" data-role="evidence-gauge" data-log-glr="${rec.log_glr}">
  <div class="axis">
    <span class="mark deescalate" style="left:${pos(layout.deescalateMark)}" title="de-escalate at 1/${escapeHtml(k2)}"></span>
    <span class="mark zero" style="left:${pos(layout.zeroMark)}"></span>
    <span class="mark escalate" style="left:${pos(layout.escalateMark)}" title="escalate at ${escapeHtml(k1)}"></span>
    <span class="needle" style="left:${pos(layout.needle)}"></span>
  </div>
  <div class="gauge-caption">evidence ${escapeHtml(rec.glr_display)}</div>
</div>`;
}

export function recommendationText(rec: Recommendation): string {
  if (rec.stopped && rec.eliminated && rec.dose_treated === 1) {
    return "Trial stopped - all doses eliminated";
  }
  const action = `${capitalize(rec.action)}, evidence ${rec.glr_display}`;
  if (rec.eliminated) {
    return `${action} - dose ${rec.dose_treated} and above eliminated`;
  }
  return action;
}

function capitalize(value: string): string {
  return value.charAt(0).toUpperCase() + value.slice(1);
}

export function renderRecommendation(rec: Recommendation, k1?: number, k2?: number): string {
  const gauge = k1 !== undefined && k2 !== undefined ? renderGauge(rec, k1, k2) : "";
  const joint =
    rec.joint_glr_display !== undefined
      ? `<div class="joint-evidence">joint evidence ${escapeHtml(rec.joint_glr_display)}</div>`
      : "";
  const warn = rec.eliminated
    ? `<div class="banner warning" data-role="elimination-warning">Overdose control removed dose ${rec.dose_treated} and everything above it.</div>`
    : "";
  return `
<div class="card recommendation ${escapeHtml(rec.action)}" data-role="recommendation" data-action="${escapeHtml(rec.action)}">
  <h3>${escapeHtml(recommendationText(rec))}</h3>
  <div>next dose: ${rec.stopped ? "none (stopped)" : rec.next_dose}</div>
  ${joint}
  ${warn}
  ${gauge}
</div>`;
}

export function renderTimeline(history: HistoryEntry[]): string {
  if (!history.length) {
    return `<div class="timeline empty" data-role="timeline">No cohorts recorded yet.</div>`;
  }
  const items = history
    .map(
      (h) => `
  <li class="timeline-entry ${escapeHtml(h.action)}" data-cohort="${h.cohort}" data-action="${escapeHtml(h.action)}">
    <span class="when">cohort ${h.cohort}</span>
    <span class="outcome">${h.dlt_count}/${h.cohort_size} DLT at dose ${h.dose_treated}</span>
    <span class="what">${escapeHtml(recommendationText(h))}</span>
  </li>`,
    )
    .join("");
  return `<ol class="timeline" data-role="timeline">${items}</ol>`;
}

export function renderWhatIfPanel(whatIf: WhatIfResponse, selected?: number): string {
  const rows = whatIf.outcomes
    .map((o) => {
      const selectedClass = o.dlt_count === selected ? " selected" : "";
      return `
  <tr class="what-if-row${selectedClass}" data-role="what-if-row" data-dlt="${o.dlt_count}" data-action="${escapeHtml(o.action)}">
    <td>${o.dlt_count}/${whatIf.cohort_size}</td>
    <td>${escapeHtml(o.action)}${o.eliminated ? " + eliminate" : ""}</td>
    <td>${escapeHtml(o.glr_display)}</td>
    <td>${o.stopped ? "stops" : `dose ${o.next_dose}`}</td>
  </tr>`;
    })
    .join("");
  return `
<div class="card what-if" data-role="what-if-panel">
  <h3>If the next cohort shows&hellip;</h3>
  <table>
    <thead><tr><th>DLTs</th><th>action</th><th>evidence</th><th>then</th></tr></thead>
    <tbody>${rows}</tbody>
  </table>
  <p class="hint">Selecting a row pre-fills the entry form; nothing is submitted until you confirm.</p>
</div>`;
}

export function renderCohortForm(snapshot: TrialSnapshot, prefill?: number): string {
  if (snapshot.stopped) {
    return `<div class="card stopped" data-role="cohort-form">Trial stopped; no further cohorts can be recorded.</div>`;
  }
  const options = Array.from({ length: 4 }, (_, i) => {
    const chosen = prefill === i ? " selected" : "";
    return `<option value="${i}"${chosen}>${i}</option>`;
  }).join("");
  return `
<form id="cohort-form" class="card" data-role="cohort-form" data-version="${snapshot.version}">
  <h3>Record cohort at dose ${snapshot.current_dose}</h3>
  <label>DLT events among 3 patients
    <select name="dltCount">${options}</select>
  </label>
  <button type="submit">Record cohort</button>
</form>`;
}

export function renderConflictBanner(): string {
  return `<div class="banner error" data-role="conflict-banner">
  Someone else updated this trial. <button data-role="refresh">Reload the latest state</button> before recording the cohort.
</div>`;
}

export function renderErrorBanner(message: string, retryable = false): string {
  const retry = retryable ? ` <button data-role="retry">Retry</button>` : "";
  return `<div class="banner error" data-role="error-banner">${escapeHtml(message)}${retry}</div>`;
}

export function renderTrialPage(
  snapshot: TrialSnapshot,
  whatIf: WhatIfResponse | null,
  lastRecommendation: HistoryEntry | null,
  prefill?: number,
): string {
  const { k1, k2 } = snapshot.design;
  const rec = lastRecommendation ?? snapshot.history[snapshot.history.length - 1] ?? null;
  const recBlock = rec ? renderRecommendation(rec, k1, k2) : "";
  const mtd = `<div class="mtd" data-role="estimated-mtd">current MTD estimate: ${
    snapshot.estimated_mtd === 0 ? "none" : `dose ${snapshot.estimated_mtd}`
  }</div>`;
  return `
<section class="trial" data-trial="${escapeHtml(snapshot.trial_id)}" data-version="${snapshot.version}">
  <header>
    <h2>Trial ${escapeHtml(snapshot.trial_id.slice(0, 8))}</h2>
    ${designSummary(snapshot.design, snapshot.phi)}
  </header>
  ${recBlock}
  ${renderDoseBars(snapshot)}
  ${mtd}
  ${renderCohortForm(snapshot, prefill)}
  ${whatIf && !snapshot.stopped ? renderWhatIfPanel(whatIf, prefill) : ""}
  ${renderTimeline(snapshot.history)}
</section>`;
}
