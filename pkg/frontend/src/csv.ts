/**
 * Strict CSV access for the simulator's output files.
 *
 * Parsing is delegated to papaparse; this layer adds the schema checks the
 * renderers rely on, and names the offending column/row when something is
 * off instead of producing NaN curves.
 */

import Papa from "papaparse";

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

/** A structural problem with an input table (wrong/missing columns, bad cells). */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export function parseTable(text: string, source = "csv"): Table {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fatal = parsed.errors.filter((e) => e.code !== "TooFewFields");
  if (fatal.length > 0) {
    const first = fatal[0];
    throw new SchemaError(
      `${source}: parse error at row ${first.row ?? "?"}: ${first.message}`,
    );
  }
  const columns = (parsed.meta.fields ?? []).map((c) => c.trim());
  if (columns.length === 0 || (columns.length === 1 && columns[0] === "")) {
    throw new SchemaError(`${source}: no header row`);
  }
  return { columns, rows: parsed.data };
}

export function requireColumns(
  table: Table,
  names: readonly string[],
  source = "csv",
): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(
        `${source}: missing column '${name}' (have: ${table.columns.join(", ")})`,
      );
    }
  }
}

/** Numeric cell access; row is 1-based to match what an editor shows. */
export function num(
  row: Record<string, string>,
  column: string,
  rowIndex: number,
  source = "csv",
): number {
  const raw = row[column];
  const value = Number(raw);
  if (raw === undefined || raw === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `${source}: row ${rowIndex + 1} column '${column}' is not a number: ${JSON.stringify(raw ?? null)}`,
    );
  }
  return value;
}

export function str(
  row: Record<string, string>,
  column: string,
  rowIndex: number,
  source = "csv",
): string {
  const raw = row[column];
  if (raw === undefined || raw === "") {
    throw new SchemaError(
      `${source}: row ${rowIndex + 1} column '${column}' is empty`,
    );
  }
  return raw;
}
