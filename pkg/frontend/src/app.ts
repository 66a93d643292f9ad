/**
 * Console wiring: upload a table, query it, answer clarification prompts,
 * and click counts to highlight the contributing rows in the grid. The
 * whole query loop renders inline; nothing ever opens a dialog.
 */

import type { Api, ColumnInfo, Envelope } from "./api.js";
import { ApiError } from "./api.js";
import { Grid } from "./grid.js";
import { clarifyPanel, errorBanner, notUnderstoodPanel, okPanel, PanelHandlers } from "./panels.js";

export interface HistoryEntry {
  utterance: string;
  envelope: Envelope;
}

export class App {
  readonly history: HistoryEntry[] = [];
  readonly grid: Grid;

  private doc: Document;
  private api: Api;
  private tableId: string | null = null;
  private sessionId: string | null = null;
  private columns: ColumnInfo[] = [];
  private rowCount = 0;
  private pendingClarification: { requestId: string; utterance: string } | null = null;
  private highlightKey: string | null = null;
  private inFlight = false;
  private lastFailed: (() => Promise<void>) | null = null;

  private results!: HTMLElement;
  private clarifySlot!: HTMLElement;
  private statusLine!: HTMLElement;
  private queryInput!: HTMLInputElement;
  private tableInfo!: HTMLElement;

  constructor(private readonly root: HTMLElement, api: Api) {
    this.doc = root.ownerDocument;
    this.api = api;
    this.grid = new Grid(this.doc);
    this.buildShell();
  }

  // -- shell -----------------------------------------------------------------

  private buildShell(): void {
    const doc = this.doc;
    this.root.classList.add("app");

    const header = doc.createElement("header");
    const title = doc.createElement("h1");
    title.textContent = "asktable console";
    this.tableInfo = doc.createElement("span");
    this.tableInfo.className = "table-info";
    header.appendChild(title);
    header.appendChild(this.tableInfo);
    this.root.appendChild(header);

    const loadZone = doc.createElement("section");
    loadZone.className = "load-zone";
    const fileInput = doc.createElement("input");
    fileInput.type = "file";
    fileInput.accept = ".csv,text/csv";
    fileInput.addEventListener("change", () => {
      const file = fileInput.files?.[0];
      if (!file) return;
      void file.text().then((text) => this.loadCsv(text, file.name));
    });
    loadZone.appendChild(fileInput);
    this.root.appendChild(loadZone);

    const main = doc.createElement("main");
    const queryZone = doc.createElement("section");
    queryZone.className = "query-zone";
    const form = doc.createElement("form");
    this.queryInput = doc.createElement("input");
    this.queryInput.type = "text";
    this.queryInput.className = "query-input";
    this.queryInput.placeholder = "ask about the table…";
    const button = doc.createElement("button");
    button.type = "submit";
    button.textContent = "ask";
    form.appendChild(this.queryInput);
    form.appendChild(button);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.ask(this.queryInput.value);
    });
    queryZone.appendChild(form);
    this.clarifySlot = doc.createElement("div");
    this.clarifySlot.className = "clarify-slot";
    queryZone.appendChild(this.clarifySlot);
    this.results = doc.createElement("div");
    this.results.className = "results";
    queryZone.appendChild(this.results);
    main.appendChild(queryZone);

    const gridZone = doc.createElement("section");
    gridZone.className = "grid-zone";
    gridZone.appendChild(this.grid.element);
    main.appendChild(gridZone);
    this.root.appendChild(main);

    this.statusLine = doc.createElement("div");
    this.statusLine.className = "status";
    this.root.appendChild(this.statusLine);
  }

  private handlers(): PanelHandlers {
    return {
      onToggleHighlight: (key, provenance) => void this.toggleHighlight(key, provenance),
      onChooseCandidate: (requestId, column) => void this.chooseCandidate(requestId, column),
      onRetry: () => void this.retry(),
    };
  }

  private setStatus(text: string): void {
    this.statusLine.textContent = text;
  }

  // -- flows ------------------------------------------------------------------

  async loadCsv(csvText: string, name: string): Promise<void> {
    try {
      const summary = await this.api.uploadTable(csvText, name);
      this.tableId = summary.table_id;
      this.sessionId = await this.api.openSession(summary.table_id);
      this.columns = summary.columns;
      this.rowCount = summary.rows;
      this.tableInfo.textContent = `${summary.name}: ${summary.rows} rows, ${summary.columns.length} columns`;
      this.results.textContent = "";
      this.clarifySlot.textContent = "";
      this.history.length = 0;
      this.pendingClarification = null;
      this.highlightKey = null;
      await this.grid.setTable(
        summary.columns.map((c) => c.name),
        summary.rows,
        async (ids) => (await this.api.fetchRows(summary.table_id, ids)).rows,
      );
      this.setStatus("table loaded");
    } catch (err) {
      this.showError(err, () => this.loadCsv(csvText, name));
    }
  }

  async ask(utterance: string): Promise<void> {
    const text = utterance.trim();
    if (!text || this.sessionId === null || this.inFlight) return;
    this.inFlight = true;
    try {
      const envelope = await this.api.query(this.sessionId, text);
      this.applyEnvelope(text, envelope);
    } catch (err) {
      this.showError(err, () => this.ask(text));
    } finally {
      this.inFlight = false;
    }
  }

  async chooseCandidate(requestId: string, column: string): Promise<void> {
    if (this.sessionId === null || this.pendingClarification === null) return;
    const utterance = this.pendingClarification.utterance;
    try {
      const envelope = await this.api.clarify(this.sessionId, requestId, column);
      this.pendingClarification = null;
      this.clarifySlot.textContent = "";
      this.applyEnvelope(utterance, envelope);
    } catch (err) {
      this.showError(err, () => this.chooseCandidate(requestId, column));
    }
  }

  private applyEnvelope(utterance: string, envelope: Envelope): void {
    const doc = this.doc;
    if (envelope.status === "clarify") {
      // At most one pending clarification is ever rendered.
      this.pendingClarification = {
        requestId: envelope.payload.request_id,
        utterance,
      };
      this.clarifySlot.textContent = "";
      this.clarifySlot.appendChild(clarifyPanel(doc, envelope.payload, this.handlers()));
      this.setStatus("waiting for a clarification answer");
      return;
    }
    this.history.push({ utterance, envelope });
    const key = `h${this.history.length - 1}`;
    let panel: HTMLElement;
    if (envelope.status === "ok") {
      panel = okPanel(doc, utterance, envelope.payload, key, this.handlers());
      this.setStatus("");
    } else if (envelope.status === "not_understood") {
      panel = notUnderstoodPanel(doc, utterance, envelope.payload);
      this.setStatus("not understood");
    } else {
      panel = errorBanner(doc, envelope.payload.message, this.handlers());
      this.setStatus("the query could not be answered");
    }
    panel.dataset.historyIndex = String(this.history.length - 1);
    const echo = panel.querySelector(".panel-utterance");
    if (echo !== null) {
      echo.addEventListener("click", () => void this.ask(utterance));
    }
    this.results.prepend(panel);
    this.queryInput.value = "";
  }

  async toggleHighlight(key: string, provenance: number[]): Promise<void> {
    if (this.highlightKey === key) {
      this.highlightKey = null;
      await this.grid.clearHighlight();
      this.setStatus("");
      return;
    }
    if (provenance.length === 0) {
      return; // nothing to highlight; not an error
    }
    this.highlightKey = key;
    await this.grid.highlight(provenance);
    this.setStatus(`highlighted ${provenance.length} rows`);
  }

  private async retry(): Promise<void> {
    const action = this.lastFailed;
    this.lastFailed = null;
    if (action) await action();
  }

  private showError(err: unknown, retryAction: () => Promise<void>): void {
    const message = err instanceof ApiError ? err.message : `unexpected error: ${String(err)}`;
    this.lastFailed = retryAction;
    this.results.prepend(errorBanner(this.doc, message, this.handlers()));
    this.setStatus("request failed");
  }

  // -- inspection (used by tests and the status bar) ---------------------------

  get loaded(): boolean {
    return this.tableId !== null;
  }

  get pending(): boolean {
    return this.pendingClarification !== null;
  }

  get highlightedKey(): string | null {
    return this.highlightKey;
  }

  get schema(): ColumnInfo[] {
    return this.columns;
  }

  get tableRows(): number {
    return this.rowCount;
  }
}

export function createApp(root: HTMLElement, api: Api): App {
  return new App(root, api);
}
