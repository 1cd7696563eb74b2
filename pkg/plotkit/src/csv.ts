/**
 * Reader for the simulator's CSV files: leading `# key=value` comment
 * lines, one header row, numeric cells. Schema (required header columns)
 * is checked before anything is rendered.
 */

import { readFileSync } from "node:fs";

export interface Table {
  comments: Map<string, string>;
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function readTable(path: string, requiredColumns: string[]): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const comments = new Map<string, string>();
  let headerIndex = 0;
  for (const line of lines) {
    if (!line.startsWith("#")) break;
    headerIndex += 1;
    const body = line.replace(/^#\s*/, "");
    const eq = body.indexOf("=");
    if (eq > 0) comments.set(body.slice(0, eq), body.slice(eq + 1));
  }
  const header = lines[headerIndex];
  if (header === undefined) throw new SchemaError(`${path}: empty file`);
  const columns = header.split(",");
  for (const col of requiredColumns) {
    if (!columns.includes(col)) {
      throw new SchemaError(
        `${path}: missing column '${col}' (found: ${columns.join(", ")})`,
      );
    }
  }
  const rows: number[][] = [];
  for (const line of lines.slice(headerIndex + 1)) {
    const cells = line.split(",").map(Number);
    if (cells.length !== columns.length || cells.some((v) => Number.isNaN(v) && !line.includes("nan"))) {
      throw new SchemaError(`${path}: malformed row '${line}'`);
    }
    rows.push(cells);
  }
  if (rows.length === 0) throw new SchemaError(`${path}: no data rows`);
  return { comments, columns, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`missing column '${name}'`);
  return table.rows.map((r) => {
    const v = r[idx];
    return v === undefined ? NaN : v;
  });
}

export function readJson(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf8"));
}
