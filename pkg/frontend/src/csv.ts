import { readFileSync } from "fs";

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaError extends Error {}

/** Strict reader for the solver's CSV tables (no quoting, LF lines). */
export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty file: expected at least a header row");
  }
  const columns = lines[0].split(",");
  const rows: Record<string, string>[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1} has ${parts.length} fields, header has ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((c, j) => (row[c] = parts[j]));
    rows.push(row);
  }
  return { columns, rows };
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Hard error naming the first offending column, per the figure contract. */
export function requireColumns(
  table: Table,
  needed: string[],
  context: string,
): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new SchemaError(`${context}: missing required column "${col}"`);
    }
  }
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`non-numeric value "${row[col]}" in column "${col}"`);
  }
  return v;
}
