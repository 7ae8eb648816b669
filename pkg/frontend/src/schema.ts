/**
 * CSV schemas of the ddmodem simulation harness.
 *
 * Sweep files: one aggregate row per SNR point, optionally preceded by `#`
 * comment lines.  Bench files: one row per (method, frame size).
 * Parsing validates the exact column set and the numeric ranges; violations
 * throw SchemaError with a message naming the offending column/row.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export interface SweepRow {
  snr_db: number;
  estimator: string;
  equalizer: string;
  trials: number;
  bits: number;
  bit_errors: number;
  ber: number;
  frames: number;
  frame_errors: number;
  fer: number;
  mean_nmse_db: number;
  mean_paths: number;
  seed: number;
}

export interface BenchRow {
  method: string;
  M: number;
  N: number;
  median_seconds: number;
  reps: number;
}

export const SWEEP_COLUMNS: (keyof SweepRow)[] = [
  "snr_db",
  "estimator",
  "equalizer",
  "trials",
  "bits",
  "bit_errors",
  "ber",
  "frames",
  "frame_errors",
  "fer",
  "mean_nmse_db",
  "mean_paths",
  "seed",
];

export const BENCH_COLUMNS: (keyof BenchRow)[] = [
  "method",
  "M",
  "N",
  "median_seconds",
  "reps",
];

const SWEEP_STRINGS = new Set(["estimator", "equalizer"]);
const BENCH_STRINGS = new Set(["method"]);

function stripComments(text: string): string {
  return text
    .split(/\r?\n/)
    .filter((line) => !line.startsWith("#"))
    .join("\n");
}

function parseTable(
  text: string,
  columns: string[],
  stringCols: Set<string>,
  what: string,
): Record<string, number | string>[] {
  const parsed = Papa.parse<Record<string, string>>(stripComments(text), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${what}: malformed CSV (${parsed.errors[0].message})`);
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== columns.join(",")) {
    throw new SchemaError(
      `${what}: expected columns [${columns.join(",")}], got [${fields.join(",")}]`,
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${what}: no data rows`);
  }
  return parsed.data.map((raw, i) => {
    const row: Record<string, number | string> = {};
    for (const col of columns) {
      const value = raw[col];
      if (value === undefined || value === "") {
        throw new SchemaError(`${what}: row ${i + 1} is missing "${col}"`);
      }
      if (stringCols.has(col)) {
        row[col] = value;
      } else {
        const num = Number(value);
        if (!Number.isFinite(num)) {
          throw new SchemaError(
            `${what}: row ${i + 1} column "${col}" is not numeric: "${value}"`,
          );
        }
        row[col] = num;
      }
    }
    return row;
  });
}

export function parseSweepCsv(text: string, name = "sweep CSV"): SweepRow[] {
  const rows = parseTable(text, SWEEP_COLUMNS, SWEEP_STRINGS, name) as unknown as SweepRow[];
  rows.forEach((row, i) => {
    for (const rate of ["ber", "fer"] as const) {
      if (row[rate] < 0 || row[rate] > 1) {
        throw new SchemaError(
          `${name}: row ${i + 1} has ${rate}=${row[rate]} outside [0, 1]`,
        );
      }
    }
    if (row.trials < 1) {
      throw new SchemaError(`${name}: row ${i + 1} has trials < 1`);
    }
  });
  return rows;
}

export function parseBenchCsv(text: string, name = "bench CSV"): BenchRow[] {
  const rows = parseTable(text, BENCH_COLUMNS, BENCH_STRINGS, name) as unknown as BenchRow[];
  rows.forEach((row, i) => {
    if (row.median_seconds <= 0) {
      throw new SchemaError(`${name}: row ${i + 1} has non-positive median_seconds`);
    }
    if (row.M < 2 || row.N < 2) {
      throw new SchemaError(`${name}: row ${i + 1} has invalid frame size`);
    }
  });
  return rows;
}
