import fs from "fs";
import Papa from "papaparse";

export const FIG1_COLUMNS = [
  "sc_density",
  "dl_fraction",
  "sue_coverage",
  "sbs_coverage",
  "sc_ase",
] as const;

export const TABLE1_COLUMNS = [
  "k",
  "n",
  "beta",
  "macro_ase",
  "sc_ase",
  "paper_macro_ase",
  "paper_sc_ase",
  "rel_dev",
] as const;

export interface Fig1Row {
  sc_density: number;
  dl_fraction: number;
  sue_coverage: number;
  sbs_coverage: number;
  sc_ase: number;
}

export interface Table1Row {
  k: number;
  n: number;
  beta: number;
  macro_ase: number;
  sc_ase: number;
  paper_macro_ase: number;
  paper_sc_ase: number;
  rel_dev: number;
}

export class SchemaError extends Error {}

function parseRecords(path: string): Record<string, string>[] {
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: malformed CSV: ${parsed.errors[0].message}`);
  }
  return parsed.data;
}

function checkColumns(path: string, rows: Record<string, string>[], columns: readonly string[]): void {
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const present = Object.keys(rows[0]);
  const missing = columns.filter((c) => !present.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${path}: missing columns: ${missing.join(", ")}`);
  }
}

function toNumbers<T>(path: string, rows: Record<string, string>[], columns: readonly string[]): T[] {
  return rows.map((row, i) => {
    const out: Record<string, number> = {};
    for (const col of columns) {
      const v = Number(row[col]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: row ${i + 1}: column ${col} is not a number (${row[col]})`);
      }
      out[col] = v;
    }
    return out as T;
  });
}

export function loadFig1(path: string): Fig1Row[] {
  const rows = parseRecords(path);
  checkColumns(path, rows, FIG1_COLUMNS);
  return toNumbers<Fig1Row>(path, rows, FIG1_COLUMNS);
}

export function loadTable1(path: string): Table1Row[] {
  const rows = parseRecords(path);
  checkColumns(path, rows, TABLE1_COLUMNS);
  return toNumbers<Table1Row>(path, rows, TABLE1_COLUMNS);
}
