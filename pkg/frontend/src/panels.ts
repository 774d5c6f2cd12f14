/** Pure HTML renderers for the workbench panels.  All display strings come
 * from the service verbatim; the renderers only escape and arrange them. */

import type { AutoPayload, EnvironmentPayload, LogPayload, RuleSpec } from "./api.js";
import { formFields } from "./manifest.js";
import type { ProofView } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function proofPanel(view: ProofView): string {
  if (view.elements.length === 0) {
    return '<p class="empty">empty proof</p>';
  }
  const rows = view.elements.map((e) => {
    const classes = ["proof-line"];
    if (view.selection.includes(e.index)) classes.push("selected");
    const badge = e.qed ? ' <span class="qed">Qed</span>' : "";
    const rule = `${e.rule}${e.parents.length ? " " + e.parents.join(" ") : ""}`;
    return (
      `<tr class="${classes.join(" ")}" data-line="${e.index}">` +
      `<td class="num">${e.index}.</td>` +
      `<td class="formula">${escapeHtml(e.formula)}</td>` +
      `<td class="rule">${escapeHtml(rule)}${badge}</td></tr>`
    );
  });
  return `<table class="proof">${rows.join("")}</table>`;
}

export function palettePanel(rules: RuleSpec[], view: ProofView): string {
  const buttons = rules.map((r) => {
    const classes = ["rule-button"];
    if (view.pendingRule?.name === r.name) classes.push("active");
    if (r.derived) classes.push("derived");
    return `<button class="${classes.join(" ")}" data-rule="${escapeHtml(r.name)}">${escapeHtml(r.name)}</button>`;
  });
  return `<div class="palette">${buttons.join("")}</div>`;
}

export function ruleFormPanel(view: ProofView): string {
  const rule = view.pendingRule;
  if (!rule) {
    return '<p class="empty">select lines, then pick a rule</p>';
  }
  const rows = formFields(rule).map((field) => {
    if (field.fromSelection) {
      return `<div class="field"><label>${escapeHtml(field.param)}</label><span class="hint">${escapeHtml(field.hint)}</span></div>`;
    }
    const value = view.inputs[field.param] ?? "";
    return (
      `<div class="field"><label>${escapeHtml(field.param)}</label>` +
      `<input data-param="${escapeHtml(field.param)}" value="${escapeHtml(value)}" placeholder="${escapeHtml(field.hint)}"></div>`
    );
  });
  const selection = view.selection.length ? view.selection.join(", ") : "none";
  return (
    `<form class="rule-form" data-rule="${escapeHtml(rule.name)}">` +
    `<h3>${escapeHtml(rule.name)}</h3>` +
    `<p class="selection">selected lines: ${selection}</p>` +
    rows.join("") +
    '<button type="submit">apply</button></form>'
  );
}

export function environmentPanel(env: EnvironmentPayload): string {
  const section = (title: string, items: string[], numbered = true) => {
    if (!items.length) return `<h3>${title}</h3><p class="empty">none</p>`;
    const lines = items.map(
      (text, i) => `<li>${numbered ? `${i}. ` : ""}${escapeHtml(text)}</li>`,
    );
    return `<h3>${title}</h3><ul>${lines.join("")}</ul>`;
  };
  return (
    `<div class="environment"><h2>${escapeHtml(env.name)}</h2>` +
    section("Axioms", env.axioms) +
    section("Defining equations", env.defEquations) +
    section("Definitions", env.definitions, false) +
    section("Assumed theorems", env.theorems) +
    `</div>`
  );
}

export function logPanel(log: LogPayload): string {
  const lines = log.calls.map((c) => `<li><code>${escapeHtml(c)}</code></li>`);
  return (
    `<div class="log"><ol class="log-calls" start="0">${lines.join("")}</ol>` +
    '<button data-action="export">export theorem file</button>' +
    '<button data-action="replay">replay log</button></div>'
  );
}

export function autoPanel(result: AutoPayload | null, error: string | null): string {
  if (error) {
    return `<p class="error">${escapeHtml(error)}</p>`;
  }
  if (!result) {
    return '<p class="empty">enter a propositional goal</p>';
  }
  if (!result.proved) {
    return `<p class="verdict">no intuitionistic proof of ${escapeHtml(result.formula)}</p>`;
  }
  const history = result.history.map((s, i) => `<li>${i + 1}. ${escapeHtml(s)}</li>`);
  const lines = result.reconstruction.map((s) => `<li><code>${escapeHtml(s)}</code></li>`);
  return (
    `<div class="auto"><p class="verdict">proved ${escapeHtml(result.formula)}</p>` +
    `<h3>History</h3><ul>${history.join("")}</ul>` +
    `<h3>Sequent proof</h3><ul class="reconstruction">${lines.join("")}</ul></div>`
  );
}

export function messageBar(message: string | null): string {
  if (!message) return "";
  return `<div class="message">${escapeHtml(message)}</div>`;
}
