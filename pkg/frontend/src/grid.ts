/**
 * Virtualized data grid: renders only the visible row window, fetching row
 * data on demand, and can highlight an exact set of row ids.
 */

import type { Cell, RowRecord } from "./api.js";

export type RowFetcher = (ids: number[]) => Promise<RowRecord[]>;

const ROW_HEIGHT = 24;
const OVERSCAN = 10;

export class Grid {
  readonly element: HTMLElement;
  private viewport: HTMLElement;
  private spacer: HTMLElement;
  private canvas: HTMLElement;
  private headerRow: HTMLElement;
  private columns: string[] = [];
  private rowCount = 0;
  private cache = new Map<number, Cell[]>();
  private highlighted = new Set<number>();
  private fetcher: RowFetcher | null = null;
  private pending: Promise<void> | null = null;

  constructor(doc: Document) {
    this.element = doc.createElement("div");
    this.element.className = "grid";
    this.headerRow = doc.createElement("div");
    this.headerRow.className = "grid-header";
    this.viewport = doc.createElement("div");
    this.viewport.className = "grid-viewport";
    this.spacer = doc.createElement("div");
    this.spacer.className = "grid-spacer";
    this.canvas = doc.createElement("div");
    this.canvas.className = "grid-canvas";
    this.spacer.appendChild(this.canvas);
    this.viewport.appendChild(this.spacer);
    this.element.appendChild(this.headerRow);
    this.element.appendChild(this.viewport);
    this.viewport.addEventListener("scroll", () => {
      void this.renderWindow();
    });
  }

  setTable(columns: string[], rowCount: number, fetcher: RowFetcher): Promise<void> {
    this.columns = columns;
    this.rowCount = rowCount;
    this.fetcher = fetcher;
    this.cache.clear();
    this.highlighted.clear();
    this.spacer.style.height = `${rowCount * ROW_HEIGHT}px`;
    this.headerRow.textContent = "";
    for (const name of columns) {
      const cell = this.element.ownerDocument.createElement("span");
      cell.className = "grid-cell grid-head";
      cell.textContent = name;
      this.headerRow.appendChild(cell);
    }
    return this.renderWindow();
  }

  /** Highlight exactly these rows (scrolling the first one into view). */
  highlight(ids: Iterable<number>): Promise<void> {
    this.highlighted = new Set(ids);
    const first = Math.min(...this.highlighted);
    if (this.highlighted.size > 0 && Number.isFinite(first)) {
      const top = first * ROW_HEIGHT;
      if (top < this.viewport.scrollTop || top > this.viewport.scrollTop + this.viewportHeight()) {
        this.viewport.scrollTop = top;
      }
    }
    return this.renderWindow();
  }

  clearHighlight(): Promise<void> {
    this.highlighted.clear();
    return this.renderWindow();
  }

  highlightedRows(): number[] {
    return [...this.highlighted].sort((a, b) => a - b);
  }

  private viewportHeight(): number {
    // jsdom reports 0; fall back to a sensible window.
    return this.viewport.clientHeight || 20 * ROW_HEIGHT;
  }

  private visibleRange(): [number, number] {
    const first = Math.max(0, Math.floor(this.viewport.scrollTop / ROW_HEIGHT) - OVERSCAN);
    const count = Math.ceil(this.viewportHeight() / ROW_HEIGHT) + 2 * OVERSCAN;
    return [first, Math.min(this.rowCount, first + count)];
  }

  async renderWindow(): Promise<void> {
    if (this.fetcher === null) return;
    const [first, last] = this.visibleRange();
    const missing: number[] = [];
    for (let id = first; id < last; id++) {
      if (!this.cache.has(id)) missing.push(id);
    }
    if (missing.length > 0) {
      const fetchTask = this.fetcher(missing).then((records) => {
        for (const record of records) this.cache.set(record.id, record.cells);
      });
      this.pending = fetchTask.then(() => undefined);
      await fetchTask;
    }
    this.paint(first, last);
  }

  /** Awaitable handle for tests and highlight callers. */
  settled(): Promise<void> {
    return this.pending ?? Promise.resolve();
  }

  private paint(first: number, last: number): void {
    const doc = this.element.ownerDocument;
    this.canvas.textContent = "";
    this.canvas.style.transform = `translateY(${first * ROW_HEIGHT}px)`;
    for (let id = first; id < last; id++) {
      const row = doc.createElement("div");
      row.className = "grid-row" + (this.highlighted.has(id) ? " highlighted" : "");
      row.dataset.rowId = String(id);
      const cells = this.cache.get(id);
      const idCell = doc.createElement("span");
      idCell.className = "grid-cell grid-id";
      idCell.textContent = String(id);
      row.appendChild(idCell);
      for (let c = 0; c < this.columns.length; c++) {
        const cell = doc.createElement("span");
        cell.className = "grid-cell";
        const value = cells?.[c];
        cell.textContent = value === null || value === undefined ? "" : String(value);
        row.appendChild(cell);
      }
      this.canvas.appendChild(row);
    }
  }
}
