import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";
import { DailyScore, SchemaError, TextRecord } from "./types.js";

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

/** Minimal RFC-4180 row parser (quotes and embedded commas/newlines). */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let cell = "";
  let inQuotes = false;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          cell += '"';
          i++;
        } else {
          inQuotes = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch === '"') {
      inQuotes = true;
    } else if (ch === ",") {
      row.push(cell);
      cell = "";
    } else if (ch === "\n" || ch === "\r") {
      if (ch === "\r" && text[i + 1] === "\n") i++;
      row.push(cell);
      cell = "";
      if (row.length > 1 || row[0] !== "") rows.push(row);
      row = [];
    } else {
      cell += ch;
    }
  }
  if (cell.length > 0 || row.length > 0) {
    row.push(cell);
    if (row.length > 1 || row[0] !== "") rows.push(row);
  }
  return rows;
}

function csvCell(value: string): string {
  return /[",\n\r]/.test(value) ? `"${value.replace(/"/g, '""')}"` : value;
}

export interface CorpusLoad {
  records: TextRecord[];
  /** (1-based line, reason) for rows dropped by validation. */
  rejected: Array<[number, string]>;
}

/**
 * Load corpus.csv (date, text, source). Rows with an invalid date or empty
 * text are reported, not fatal. Days that appear only through rejected rows
 * are kept so they can be emitted as empty corpus days.
 */
export function loadCorpus(path: string): CorpusLoad {
  const rows = parseCsv(readFileSync(path, "utf-8"));
  if (rows.length === 0) {
    throw new SchemaError(`corpus ${path} is empty`);
  }
  const header = rows[0].map((h) => h.trim());
  const iDate = header.indexOf("date");
  const iText = header.indexOf("text");
  const iSource = header.indexOf("source");
  if (iDate < 0 || iText < 0 || iSource < 0) {
    throw new SchemaError(`corpus header must contain date,text,source; got ${header.join(",")}`);
  }
  const records: TextRecord[] = [];
  const rejected: Array<[number, string]> = [];
  for (let i = 1; i < rows.length; i++) {
    const date = (rows[i][iDate] ?? "").trim();
    const text = (rows[i][iText] ?? "").trim();
    if (!ISO_DATE.test(date)) {
      rejected.push([i + 1, `invalid date '${date}'`]);
      continue;
    }
    if (text.length === 0) {
      rejected.push([i + 1, "empty text"]);
      continue;
    }
    records.push({ date, text, source: (rows[i][iSource] ?? "").trim() });
  }
  return { records, rejected };
}

/**
 * Write the sentiment.csv contract: date, score, n_texts. A null score is
 * an empty field (an empty corpus day). The optional label appears as a
 * '# label=' comment the downstream loader understands.
 */
export function writeScores(path: string, rows: DailyScore[], label?: string): void {
  const lines: string[] = [];
  if (label) lines.push(`# label=${label}`);
  lines.push("date,score,n_texts");
  for (const row of rows) {
    const score = row.score === null ? "" : String(row.score);
    lines.push([csvCell(row.date), score, String(row.nTexts)].join(","));
  }
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}
