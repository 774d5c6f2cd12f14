/** Workbench view state.
 *
 * The view derives solely from the service's session state plus the local
 * selection and pending rule form; reconcile() is called after every
 * round-trip and prunes anything the new proof no longer supports.  No
 * proof data is ever computed client-side.
 */

import type { ProofElement, ProofPayload, RuleSpec } from "./api.js";

export interface ProofView {
  lines: string[];
  elements: ProofElement[];
  selection: number[];
  pendingRule: RuleSpec | null;
  inputs: Record<string, string>;
  message: string | null;
}

export function emptyView(): ProofView {
  return { lines: [], elements: [], selection: [], pendingRule: null, inputs: {}, message: null };
}

export function reconcile(view: ProofView, proof: ProofPayload): ProofView {
  return {
    ...view,
    lines: [...proof.lines],
    elements: [...proof.elements],
    selection: view.selection.filter((i) => i < proof.elements.length),
  };
}

export function toggleSelection(view: ProofView, index: number): ProofView {
  if (index < 0 || index >= view.elements.length) {
    return view;
  }
  const selection = view.selection.includes(index)
    ? view.selection.filter((i) => i !== index)
    : [...view.selection, index];
  return { ...view, selection };
}

export function chooseRule(view: ProofView, rule: RuleSpec): ProofView {
  return { ...view, pendingRule: rule, inputs: {}, message: null };
}

export function setInput(view: ProofView, param: string, text: string): ProofView {
  return { ...view, inputs: { ...view.inputs, [param]: text } };
}

export function clearPending(view: ProofView): ProofView {
  return { ...view, pendingRule: null, inputs: {}, selection: [] };
}

export function withMessage(view: ProofView, message: string | null): ProofView {
  return { ...view, message };
}
