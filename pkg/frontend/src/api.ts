/**
 * Typed client for the query service. Types mirror docs/wire_schema.json;
 * the console talks to the service exclusively through these endpoints.
 */

export type Cell = string | number | null;

export interface TokenSpan {
  token: string;
  start: number;
  end: number;
}

export interface RowRecord {
  id: number;
  cells: Cell[];
}

export interface RowsResult {
  kind: "rows";
  columns: string[];
  rows: RowRecord[];
  provenance: number[];
}

export interface CountResult {
  kind: "count";
  count: number;
  provenance: number[];
}

export interface ValueResult {
  kind: "value";
  column: string;
  value: Cell;
  count: number;
  provenance: number[];
}

export interface GroupEntry {
  key: Cell[];
  count: number;
  provenance: number[];
}

export interface GroupsResult {
  kind: "groups";
  group_columns: string[];
  groups: GroupEntry[];
  dropped_rows: number[];
}

export type QueryResult = RowsResult | CountResult | ValueResult | GroupsResult;

export interface OkPayload {
  ir: string;
  result: QueryResult;
  dropped_tokens: TokenSpan[];
}

export interface Candidate {
  column: string;
  index: number;
  count: number;
}

export interface ClarifyPayload {
  request_id: string;
  value: string;
  candidates: Candidate[];
}

export interface NotUnderstoodPayload {
  unmatched: TokenSpan[];
  reason: string;
}

export interface ErrorPayload {
  code: string;
  message: string;
}

export type Envelope =
  | { status: "ok"; api_version: string; payload: OkPayload }
  | { status: "clarify"; api_version: string; payload: ClarifyPayload }
  | { status: "not_understood"; api_version: string; payload: NotUnderstoodPayload }
  | { status: "error"; api_version: string; payload: ErrorPayload };

export interface ColumnInfo {
  name: string;
  kind: "textual" | "numeric";
}

export interface TableSummary {
  table_id: string;
  name: string;
  rows: number;
  columns: ColumnInfo[];
}

export interface RowsPage {
  columns: string[];
  rows: RowRecord[];
}

/** Network or transport failure (HTTP errors carrying envelopes are returned, not thrown). */
export class ApiError extends Error {
  constructor(message: string, readonly retryable = true) {
    super(message);
  }
}

export interface Api {
  uploadTable(csvText: string, name: string): Promise<TableSummary>;
  openSession(tableId: string): Promise<string>;
  query(sessionId: string, utterance: string): Promise<Envelope>;
  clarify(sessionId: string, requestId: string, column: string): Promise<Envelope>;
  fetchRows(tableId: string, ids: number[]): Promise<RowsPage>;
}

export class HttpApi implements Api {
  constructor(private readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError(`network error: ${String(err)}`);
    }
    if (response.status >= 500) {
      throw new ApiError(`service error (${response.status})`);
    }
    return response;
  }

  async uploadTable(csvText: string, name: string): Promise<TableSummary> {
    const response = await this.request(`/tables?name=${encodeURIComponent(name)}`, {
      method: "POST",
      headers: { "Content-Type": "text/csv" },
      body: csvText,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(body?.payload?.message ?? "upload rejected", false);
    }
    return body as TableSummary;
  }

  async openSession(tableId: string): Promise<string> {
    const response = await this.request(`/tables/${tableId}/sessions`, {
      method: "POST",
    });
    if (!response.ok) {
      throw new ApiError("could not open a session", false);
    }
    const body = await response.json();
    return body.session_id as string;
  }

  async query(sessionId: string, utterance: string): Promise<Envelope> {
    const response = await this.request(`/sessions/${sessionId}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ utterance }),
    });
    return (await response.json()) as Envelope;
  }

  async clarify(sessionId: string, requestId: string, column: string): Promise<Envelope> {
    const response = await this.request(`/sessions/${sessionId}/clarify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ request_id: requestId, column }),
    });
    return (await response.json()) as Envelope;
  }

  async fetchRows(tableId: string, ids: number[]): Promise<RowsPage> {
    const response = await this.request(`/tables/${tableId}/rows?ids=${ids.join(",")}`);
    if (!response.ok) {
      throw new ApiError("row fetch failed");
    }
    return (await response.json()) as RowsPage;
  }
}

/** Provenance ids of a whole result (union over elements). */
export function resultProvenance(result: QueryResult): number[] {
  if (result.kind === "groups") {
    const ids: number[] = [];
    for (const group of result.groups) ids.push(...group.provenance);
    return ids;
  }
  return result.provenance;
}
