/** Typed client for the ndkernel session service.
 *
 * Every mutation goes through POST /session/{id}/command, so the UI can
 * never produce a proof state the command shell could not.  The fetch
 * implementation is injectable for tests.
 */

export interface ProofElement {
  index: number;
  formula: string;
  ascii: string;
  rule: string;
  parents: number[];
  qed: boolean;
  dischargedBy: number[];
}

export interface ProofPayload {
  lines: string[];
  elements: ProofElement[];
}

export interface CommandOutcome {
  ok: boolean;
  message: string | null;
  lines: string[] | null;
  proof: ProofPayload;
}

export interface EnvironmentPayload {
  name: string;
  axioms: string[];
  theorems: string[];
  defEquations: string[];
  definitions: string[];
  classGuard: string;
  signature: unknown;
}

export interface LogPayload {
  log: { rule: string; args: unknown[] }[];
  calls: string[];
}

export interface RuleParam {
  name: string;
  kind: string;
}

export interface RuleSpec {
  name: string;
  derived: boolean;
  params: RuleParam[];
}

export interface AutoPayload {
  proved: boolean;
  formula: string;
  history: string[];
  reconstruction: string[];
}

export interface CheckItem {
  name: string;
  status: string;
  detail: string;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = (await response.json()) as { detail?: string };
        if (payload.detail) detail = payload.detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async createSession(): Promise<string> {
    const payload = await this.request<{ id: string }>("POST", "/session");
    return payload.id;
  }

  command(sid: string, command: string, args: unknown[] = []): Promise<CommandOutcome> {
    return this.request("POST", `/session/${sid}/command`, { command, args });
  }

  proof(sid: string): Promise<ProofPayload> {
    return this.request("GET", `/session/${sid}/proof`);
  }

  environment(sid: string): Promise<EnvironmentPayload> {
    return this.request("GET", `/session/${sid}/environment`);
  }

  log(sid: string): Promise<LogPayload> {
    return this.request("GET", `/session/${sid}/log`);
  }

  undo(sid: string): Promise<CommandOutcome> {
    return this.request("POST", `/session/${sid}/undo`);
  }

  async save(sid: string, name: string): Promise<unknown> {
    const payload = await this.request<{ document: unknown }>("POST", `/session/${sid}/save`, { name });
    return payload.document;
  }

  theorem(name: string): Promise<unknown> {
    return this.request("GET", `/theorem/${encodeURIComponent(name)}`);
  }

  async check(names: string[]): Promise<{ ok: boolean; items: CheckItem[] }> {
    return this.request("POST", "/check", { names });
  }

  auto(formula: string): Promise<AutoPayload> {
    return this.request("POST", "/auto", { formula });
  }

  async rules(): Promise<RuleSpec[]> {
    const payload = await this.request<{ rules: RuleSpec[] }>("GET", "/rules");
    return payload.rules;
  }
}
