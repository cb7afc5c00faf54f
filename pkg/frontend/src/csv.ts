import { readFileSync, existsSync } from "node:fs";

export interface Table {
  path: string;
  header: string[];
  rows: number[][];
  /** series label from the JSON sidecar, when present */
  label: string;
}

export class CsvError extends Error {}

/** Parse one kerrcat CSV (comma-separated, header row, numeric cells). */
export function readCsv(path: string): Table {
  if (!existsSync(path)) {
    throw new CsvError(`csv not found: ${path}`);
  }
  const text = readFileSync(path, "utf8").trim();
  const lines = text.split(/\r?\n/);
  if (lines.length < 1) {
    throw new CsvError(`empty csv: ${path}`);
  }
  const header = lines[0].split(",").map((s) => s.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    if (!lines[i].trim()) continue;
    const cells = lines[i].split(",").map((c) => Number(c));
    if (cells.length !== header.length) {
      throw new CsvError(
        `${path}:${i + 1}: expected ${header.length} cells, found ${cells.length}`,
      );
    }
    rows.push(cells);
  }
  return { path, header, rows, label: sidecarLabel(path) };
}

function sidecarLabel(csvPath: string): string {
  const side = csvPath.replace(/\.csv$/, ".json");
  if (existsSync(side)) {
    try {
      const meta = JSON.parse(readFileSync(side, "utf8"));
      if (typeof meta.series === "string" && meta.series) return meta.series;
      if (meta.scenario?.scenario?.name) return String(meta.scenario.scenario.name);
    } catch {
      // fall through to the filename
    }
  }
  const stem = csvPath.replace(/^.*\//, "").replace(/\.csv$/, "");
  const parts = stem.split("__");
  return parts[parts.length - 1];
}

/** Hard header check: order and names must match exactly. */
export function requireHeader(table: Table, expected: string[]): void {
  const found = table.header.join(",");
  const want = expected.join(",");
  if (found !== want) {
    throw new CsvError(
      `header mismatch in ${table.path}\n  expected: ${want}\n  found:    ${found}`,
    );
  }
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) throw new CsvError(`column ${name} missing from ${table.path}`);
  return table.rows.map((r) => r[idx]);
}
