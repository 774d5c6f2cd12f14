/** Workbench bootstrap: one session per tab, commands issued strictly
 * sequentially (each awaited before the next is allowed). */

import { ApiClient, ApiError, AutoPayload, RuleSpec } from "./api.js";
import { buildArgs } from "./manifest.js";
import {
  autoPanel,
  environmentPanel,
  logPanel,
  messageBar,
  palettePanel,
  proofPanel,
  ruleFormPanel,
} from "./panels.js";
import {
  ProofView,
  chooseRule,
  clearPending,
  emptyView,
  reconcile,
  setInput,
  toggleSelection,
  withMessage,
} from "./state.js";

interface Workbench {
  api: ApiClient;
  sid: string;
  rules: RuleSpec[];
  view: ProofView;
  autoResult: AutoPayload | null;
  autoError: string | null;
  busy: boolean;
}

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function renderAll(wb: Workbench): void {
  el("message").innerHTML = messageBar(wb.view.message);
  el("proof").innerHTML = proofPanel(wb.view);
  el("palette").innerHTML = palettePanel(wb.rules, wb.view);
  el("rule-form").innerHTML = ruleFormPanel(wb.view);
  el("auto-output").innerHTML = autoPanel(wb.autoResult, wb.autoError);
}

async function refreshEnvironment(wb: Workbench): Promise<void> {
  el("environment").innerHTML = environmentPanel(await wb.api.environment(wb.sid));
  el("log").innerHTML = logPanel(await wb.api.log(wb.sid));
}

async function runCommand(wb: Workbench, command: string, args: unknown[]): Promise<boolean> {
  if (wb.busy) return false;
  wb.busy = true;
  try {
    const outcome = await wb.api.command(wb.sid, command, args);
    wb.view = reconcile(wb.view, outcome.proof);
    wb.view = withMessage(wb.view, outcome.ok ? null : outcome.message);
    if (outcome.ok) {
      wb.view = clearPending(wb.view);
      await refreshEnvironment(wb);
    }
    return outcome.ok;
  } catch (err) {
    wb.view = withMessage(wb.view, err instanceof ApiError ? err.message : String(err));
    return false;
  } finally {
    wb.busy = false;
    renderAll(wb);
  }
}

function download(name: string, payload: unknown): void {
  const blob = new Blob([JSON.stringify(payload, null, 1)], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = `${name}.json`;
  a.click();
  URL.revokeObjectURL(url);
}

async function exportTheorem(wb: Workbench): Promise<void> {
  const name = window.prompt("theorem name", "export") ?? "export";
  try {
    const doc = await wb.api.save(wb.sid, name);
    download(name, doc);
  } catch (err) {
    wb.view = withMessage(wb.view, err instanceof ApiError ? err.message : String(err));
    renderAll(wb);
  }
}

function wire(wb: Workbench): void {
  el("proof").addEventListener("click", (event) => {
    const row = (event.target as HTMLElement).closest("[data-line]");
    if (!row) return;
    wb.view = toggleSelection(wb.view, Number(row.getAttribute("data-line")));
    renderAll(wb);
  });

  el("palette").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest("[data-rule]");
    if (!button) return;
    const rule = wb.rules.find((r) => r.name === button.getAttribute("data-rule"));
    if (rule) {
      wb.view = chooseRule(wb.view, rule);
      renderAll(wb);
    }
  });

  el("rule-form").addEventListener("input", (event) => {
    const input = event.target as HTMLInputElement;
    const param = input.getAttribute("data-param");
    if (param) {
      wb.view = setInput(wb.view, param, input.value);
    }
  });

  el("rule-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const rule = wb.view.pendingRule;
    if (!rule) return;
    let args: unknown[];
    try {
      args = buildArgs(rule, wb.view.selection, wb.view.inputs);
    } catch (err) {
      wb.view = withMessage(wb.view, String(err instanceof Error ? err.message : err));
      renderAll(wb);
      return;
    }
    void runCommand(wb, rule.name, args);
  });

  el("undo").addEventListener("click", () => void runCommand(wb, "Undo", []));
  el("qed").addEventListener("click", () => {
    const selection = wb.view.selection;
    const target = selection.length ? selection[selection.length - 1] : wb.view.elements.length - 1;
    void runCommand(wb, "Qed", [target]);
  });
  el("load-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const name = (el("load-name") as HTMLInputElement).value.trim();
    if (name) void runCommand(wb, "Load", [name]);
  });

  el("log").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest("[data-action]");
    if (!button) return;
    const action = button.getAttribute("data-action");
    if (action === "export") void exportTheorem(wb);
    if (action === "replay") void runCommand(wb, "GenerateProof", []);
  });

  el("auto-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const goal = (el("auto-goal") as HTMLInputElement).value.trim();
    if (!goal) return;
    void (async () => {
      try {
        wb.autoResult = await wb.api.auto(goal);
        wb.autoError = null;
      } catch (err) {
        wb.autoResult = null;
        wb.autoError = err instanceof ApiError ? err.message : String(err);
      }
      renderAll(wb);
    })();
  });
}

export async function start(base = ""): Promise<void> {
  const api = new ApiClient(base);
  const wb: Workbench = {
    api,
    sid: await api.createSession(),
    rules: await api.rules(),
    view: emptyView(),
    autoResult: null,
    autoError: null,
    busy: false,
  };
  wire(wb);
  wb.view = reconcile(wb.view, await api.proof(wb.sid));
  renderAll(wb);
  await refreshEnvironment(wb);
}

declare global {
  interface Window {
    ndkernelWorkbench?: Promise<void>;
  }
}

if (typeof document !== "undefined" && document.getElementById("proof")) {
  window.ndkernelWorkbench = start();
}
