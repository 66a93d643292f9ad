/**
 * Inline result panels: every outcome renders into the results column,
 * never into a dialog. Counts are rendered straight from the wire payload
 * (no client-side recomputation) and carry their provenance ids so a click
 * can highlight the rows behind them.
 */

import type {
  Cell,
  ClarifyPayload,
  NotUnderstoodPayload,
  OkPayload,
  QueryResult,
  TokenSpan,
} from "./api.js";

export interface PanelHandlers {
  onToggleHighlight(key: string, provenance: number[]): void;
  onChooseCandidate(requestId: string, column: string): void;
  onRetry(): void;
}

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cellText(cell: Cell): string {
  return cell === null ? "" : String(cell);
}

function provenanceChip(
  doc: Document,
  label: string,
  key: string,
  provenance: number[],
  handlers: PanelHandlers,
): HTMLElement {
  const chip = el(doc, "button", "count-chip", label);
  chip.dataset.provenanceKey = key;
  chip.dataset.provenance = provenance.join(",");
  chip.title = "highlight the contributing rows";
  chip.addEventListener("click", () => handlers.onToggleHighlight(key, provenance));
  return chip;
}

function renderResult(
  doc: Document,
  result: QueryResult,
  key: string,
  handlers: PanelHandlers,
): HTMLElement {
  const body = el(doc, "div", "result-body");
  if (result.kind === "count") {
    body.appendChild(
      provenanceChip(doc, String(result.count), key, result.provenance, handlers),
    );
    body.appendChild(el(doc, "span", "result-note", " matching rows"));
    return body;
  }
  if (result.kind === "value") {
    body.appendChild(el(doc, "span", "result-value", cellText(result.value)));
    body.appendChild(el(doc, "span", "result-note", ` in ${result.column}, seen `));
    body.appendChild(
      provenanceChip(doc, `${result.count}×`, key, result.provenance, handlers),
    );
    return body;
  }
  if (result.kind === "groups") {
    const table = el(doc, "table", "result-groups");
    const head = el(doc, "tr", "");
    for (const name of result.group_columns) {
      head.appendChild(el(doc, "th", "", name));
    }
    head.appendChild(el(doc, "th", "", "count"));
    table.appendChild(head);
    result.groups.forEach((group, i) => {
      const row = el(doc, "tr", "group-row");
      for (const part of group.key) {
        row.appendChild(el(doc, "td", "", cellText(part)));
      }
      const countCell = el(doc, "td", "");
      countCell.appendChild(
        provenanceChip(doc, String(group.count), `${key}:${i}`, group.provenance, handlers),
      );
      row.appendChild(countCell);
      table.appendChild(row);
    });
    body.appendChild(table);
    return body;
  }
  // rows
  const summary = el(doc, "div", "");
  summary.appendChild(
    provenanceChip(doc, `${result.rows.length} rows`, key, result.provenance, handlers),
  );
  body.appendChild(summary);
  const table = el(doc, "table", "result-rows");
  const head = el(doc, "tr", "");
  head.appendChild(el(doc, "th", "", "row"));
  for (const name of result.columns) head.appendChild(el(doc, "th", "", name));
  table.appendChild(head);
  for (const record of result.rows.slice(0, 50)) {
    const row = el(doc, "tr", "");
    row.appendChild(el(doc, "td", "", String(record.id)));
    for (const cell of record.cells) row.appendChild(el(doc, "td", "", cellText(cell)));
    table.appendChild(row);
  }
  if (result.rows.length > 50) {
    body.appendChild(el(doc, "div", "result-note", `showing first 50 of ${result.rows.length}`));
  }
  body.appendChild(table);
  return body;
}

export function okPanel(
  doc: Document,
  utterance: string,
  payload: OkPayload,
  key: string,
  handlers: PanelHandlers,
): HTMLElement {
  const panel = el(doc, "div", "panel panel-ok");
  panel.appendChild(el(doc, "div", "panel-utterance", utterance));
  panel.appendChild(el(doc, "div", "panel-ir", `understood as ${payload.ir}`));
  if (payload.dropped_tokens.length > 0) {
    const words = payload.dropped_tokens.map((t) => t.token).join(", ");
    panel.appendChild(el(doc, "div", "panel-dropped", `ignored: ${words}`));
  }
  panel.appendChild(renderResult(doc, payload.result, key, handlers));
  return panel;
}

export function clarifyPanel(
  doc: Document,
  payload: ClarifyPayload,
  handlers: PanelHandlers,
): HTMLElement {
  const panel = el(doc, "div", "panel panel-clarify");
  panel.appendChild(
    el(
      doc,
      "div",
      "clarify-question",
      `"${payload.value}" appears in more than one column — which did you mean?`,
    ),
  );
  const choices = el(doc, "div", "clarify-choices");
  for (const candidate of payload.candidates) {
    const button = el(
      doc,
      "button",
      "clarify-choice",
      `${candidate.column} (${candidate.count})`,
    );
    button.dataset.column = candidate.column;
    button.addEventListener("click", () =>
      handlers.onChooseCandidate(payload.request_id, candidate.column),
    );
    choices.appendChild(button);
  }
  panel.appendChild(choices);
  return panel;
}

/** Echo the utterance with unmatched token spans underlined. */
export function notUnderstoodPanel(
  doc: Document,
  utterance: string,
  payload: NotUnderstoodPayload,
): HTMLElement {
  const panel = el(doc, "div", "panel panel-not-understood");
  const echo = el(doc, "div", "panel-echo");
  const spans = [...payload.unmatched].sort((a: TokenSpan, b: TokenSpan) => a.start - b.start);
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) {
      echo.appendChild(doc.createTextNode(utterance.slice(cursor, span.start)));
    }
    const mark = el(doc, "u", "unmatched", utterance.slice(span.start, span.end));
    echo.appendChild(mark);
    cursor = span.end;
  }
  if (cursor < utterance.length) {
    echo.appendChild(doc.createTextNode(utterance.slice(cursor)));
  }
  panel.appendChild(echo);
  panel.appendChild(
    el(doc, "div", "panel-reason", payload.reason || "not understood; try rephrasing"),
  );
  return panel;
}

export function errorBanner(doc: Document, message: string, handlers: PanelHandlers): HTMLElement {
  const panel = el(doc, "div", "panel panel-error");
  panel.appendChild(el(doc, "span", "error-message", message));
  const retry = el(doc, "button", "error-retry", "retry");
  retry.addEventListener("click", () => handlers.onRetry());
  panel.appendChild(retry);
  return panel;
}
