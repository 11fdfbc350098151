/**
 * Strict reader for the harness CSV dialect: comma-separated, '.' decimals,
 * one header row, LF line endings, no quoting (values are numbers and plain
 * words).  Raw field strings are preserved so labels can embed them exactly.
 */

import { readFileSync } from "fs";

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `CSV row ${i + 1} has ${fields.length} fields, header has ${header.length}`
      );
    }
    return fields;
  });
  return { header, rows };
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column '${name}' (header: ${table.header.join(",")})`);
  }
  return idx;
}

export function column(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]);
}

export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((raw, i) => {
    const v = Number(raw);
    if (!Number.isFinite(v)) {
      throw new Error(`column '${name}' row ${i + 1}: '${raw}' is not a finite number`);
    }
    return v;
  });
}

/** key/value tables (summary.csv, constants.csv) as a raw-string map. */
export function keyValues(table: Table): Map<string, string> {
  columnIndex(table, "key");
  columnIndex(table, "value");
  const map = new Map<string, string>();
  for (const row of table.rows) {
    map.set(row[0], row[1]);
  }
  return map;
}

export function requireKey(map: Map<string, string>, key: string): string {
  const value = map.get(key);
  if (value === undefined || value === "") {
    throw new Error(`missing key '${key}' in summary/constants file`);
  }
  return value;
}
