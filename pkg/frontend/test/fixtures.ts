/** Canned wire payloads for the 6-row fixture table, mirroring the
 * service's golden envelopes byte-for-byte at the JSON level. */

import type { Api, Envelope, RowsPage, TableSummary } from "../src/api.js";

export const MINI6_CSV = `City,County,CourseType,Price,Holes,Difficulty,Terrain
Anderson,Madison,Private,Premium,18,Moderate,Varied
Greenfield,Hancock,Public,Low,18,Easy,Varied
Marion,Marion,Public,Low,9,Easy,Flat
Marion,Marion,Public,Premium,18,Hard,Rolling
Lebanon,Boone,Public,Low,18,Easy,Rolling
Marion,Marion,Private,Premium,18,Hard,Hilly
`;

export const MINI6_COLUMNS = [
  "City", "County", "CourseType", "Price", "Holes", "Difficulty", "Terrain",
];

export const MINI6_CELLS: (string | number)[][] = [
  ["Anderson", "Madison", "Private", "Premium", 18, "Moderate", "Varied"],
  ["Greenfield", "Hancock", "Public", "Low", 18, "Easy", "Varied"],
  ["Marion", "Marion", "Public", "Low", 9, "Easy", "Flat"],
  ["Marion", "Marion", "Public", "Premium", 18, "Hard", "Rolling"],
  ["Lebanon", "Boone", "Public", "Low", 18, "Easy", "Rolling"],
  ["Marion", "Marion", "Private", "Premium", 18, "Hard", "Hilly"],
];

export const SUMMARY: TableSummary = {
  table_id: "t1",
  name: "mini6.csv",
  rows: 6,
  columns: [
    { name: "City", kind: "textual" },
    { name: "County", kind: "textual" },
    { name: "CourseType", kind: "textual" },
    { name: "Price", kind: "textual" },
    { name: "Holes", kind: "numeric" },
    { name: "Difficulty", kind: "textual" },
    { name: "Terrain", kind: "textual" },
  ],
};

export const COUNT_EASY: Envelope = {
  status: "ok",
  api_version: "1.0.0",
  payload: {
    ir: '(count (= "Difficulty" "easy"))',
    result: { kind: "count", count: 3, provenance: [1, 2, 4] },
    dropped_tokens: [{ token: "courses", start: 14, end: 21 }],
  },
};

export const GROUPS_DIFFICULTY: Envelope = {
  status: "ok",
  api_version: "1.0.0",
  payload: {
    ir: '(group-count ("Difficulty") (true))',
    result: {
      kind: "groups",
      group_columns: ["Difficulty"],
      groups: [
        { key: ["Moderate"], count: 1, provenance: [0] },
        { key: ["Easy"], count: 3, provenance: [1, 2, 4] },
        { key: ["Hard"], count: 2, provenance: [3, 5] },
      ],
      dropped_rows: [],
    },
    dropped_tokens: [{ token: "courses", start: 9, end: 16 }],
  },
};

export const CLARIFY_MARION: Envelope = {
  status: "clarify",
  api_version: "1.0.0",
  payload: {
    request_id: "r1",
    value: "marion",
    candidates: [
      { column: "City", index: 0, count: 3 },
      { column: "County", index: 1, count: 3 },
    ],
  },
};

export const MARION_COUNTY_ROWS: Envelope = {
  status: "ok",
  api_version: "1.0.0",
  payload: {
    ir: '(filter (= "County" "marion"))',
    result: {
      kind: "rows",
      columns: MINI6_COLUMNS,
      rows: [2, 3, 5].map((id) => ({ id, cells: MINI6_CELLS[id] })),
      provenance: [2, 3, 5],
    },
    dropped_tokens: [{ token: "courses", start: 7, end: 14 }],
  },
};

export const NOT_UNDERSTOOD_ZZZ: Envelope = {
  status: "not_understood",
  api_version: "1.0.0",
  payload: {
    unmatched: [
      { token: "zzz", start: 0, end: 3 },
      { token: "qqq", start: 4, end: 7 },
    ],
    reason: "no intent could be resolved",
  },
};

export const ZERO_COUNT: Envelope = {
  status: "ok",
  api_version: "1.0.0",
  payload: {
    ir: '(count (= "County" "nowhere"))',
    result: { kind: "count", count: 0, provenance: [] },
    dropped_tokens: [],
  },
};

const CANNED: Record<string, Envelope> = {
  "how many easy courses": COUNT_EASY,
  "how many courses are of each difficulty": GROUPS_DIFFICULTY,
  "marion courses": CLARIFY_MARION,
  "zzz qqq": NOT_UNDERSTOOD_ZZZ,
  "count of nowhere county": ZERO_COUNT,
};

export class MockApi implements Api {
  queries: string[] = [];
  clarifications: Array<{ requestId: string; column: string }> = [];
  rowFetches: number[][] = [];
  failNextQuery = false;

  async uploadTable(_csvText: string, _name: string): Promise<TableSummary> {
    return SUMMARY;
  }

  async openSession(_tableId: string): Promise<string> {
    return "s1";
  }

  async query(_sessionId: string, utterance: string): Promise<Envelope> {
    if (this.failNextQuery) {
      this.failNextQuery = false;
      const { ApiError } = await import("../src/api.js");
      throw new ApiError("network error: connection refused");
    }
    this.queries.push(utterance);
    const envelope = CANNED[utterance];
    if (!envelope) {
      return NOT_UNDERSTOOD_ZZZ;
    }
    return envelope;
  }

  async clarify(_sessionId: string, requestId: string, column: string): Promise<Envelope> {
    this.clarifications.push({ requestId, column });
    return MARION_COUNTY_ROWS;
  }

  async fetchRows(_tableId: string, ids: number[]): Promise<RowsPage> {
    this.rowFetches.push(ids);
    return {
      columns: MINI6_COLUMNS,
      rows: ids.map((id) => ({ id, cells: MINI6_CELLS[id] })),
    };
  }
}
