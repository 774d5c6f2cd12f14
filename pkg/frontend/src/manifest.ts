/** Parameter forms derived from the backend's rule-signature manifest.
 *
 * Line-valued parameters are filled from the user's line selection (in
 * click order); everything else becomes a text field whose content is
 * coerced by the parameter kind.  Adding a kernel rule therefore needs no
 * UI change.
 */

import type { RuleSpec } from "./api.js";

const LINE_KINDS = new Set(["line", "discharge"]);

const FIELD_HINTS: Record<string, string> = {
  formula: "formula (ascii notation)",
  raw: "formula (ascii notation)",
  term: "term (ascii notation)",
  var: "variable name",
  name: "symbol name",
  positions: "occurrence indices, e.g. 0,2",
  int: "index",
  names: "names, comma separated",
  terms: "terms, comma separated",
};

export interface FormField {
  param: string;
  kind: string;
  fromSelection: boolean;
  hint: string;
}

export function formFields(rule: RuleSpec): FormField[] {
  return rule.params.map((p) => ({
    param: p.name,
    kind: p.kind,
    fromSelection: LINE_KINDS.has(p.kind),
    hint: LINE_KINDS.has(p.kind) ? "proof line (from selection)" : FIELD_HINTS[p.kind] ?? p.kind,
  }));
}

export function selectionArity(rule: RuleSpec): number {
  return rule.params.filter((p) => LINE_KINDS.has(p.kind)).length;
}

export function coerceArg(kind: string, text: string): unknown {
  const trimmed = text.trim();
  switch (kind) {
    case "line":
    case "discharge":
    case "int": {
      const n = Number(trimmed);
      if (!Number.isInteger(n) || trimmed === "") {
        throw new Error(`expected an integer, got ${JSON.stringify(text)}`);
      }
      return n;
    }
    case "positions": {
      const body = trimmed.replace(/^\[/, "").replace(/\]$/, "");
      if (body.trim() === "") return [];
      return body.split(",").map((part) => {
        const n = Number(part.trim());
        if (!Number.isInteger(n)) {
          throw new Error(`bad occurrence index ${JSON.stringify(part)}`);
        }
        return n;
      });
    }
    case "names":
    case "terms": {
      if (trimmed === "") return [];
      return splitTopLevel(trimmed).map((part) => part.trim());
    }
    default:
      return trimmed;
  }
}

/** Split on commas outside parentheses/brackets/braces, so a term list
 * like "union(x,y), z" yields two entries. */
function splitTopLevel(text: string): string[] {
  const parts: string[] = [];
  let depth = 0;
  let current = "";
  for (const ch of text) {
    if ("([{".includes(ch)) depth += 1;
    if (")]}".includes(ch)) depth -= 1;
    if (ch === "," && depth === 0) {
      parts.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  parts.push(current);
  return parts;
}

/** Assemble the command arguments for a rule application: line-valued
 * parameters consume the selected line indices in order, the rest come
 * from the form inputs. */
export function buildArgs(
  rule: RuleSpec,
  selection: number[],
  inputs: Record<string, string>,
): unknown[] {
  const needed = selectionArity(rule);
  if (selection.length !== needed) {
    throw new Error(`${rule.name} needs ${needed} selected line(s), got ${selection.length}`);
  }
  const queue = [...selection];
  return rule.params.map((p) => {
    if (LINE_KINDS.has(p.kind)) {
      return queue.shift() as number;
    }
    const raw = inputs[p.name];
    if (raw === undefined || raw.trim() === "") {
      if (p.kind === "positions") return [];
      throw new Error(`missing parameter ${p.name}`);
    }
    return coerceArg(p.kind, raw);
  });
}
