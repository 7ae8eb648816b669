#!/usr/bin/env node
/**
 * ddmodem-plot — render SVG charts from harness CSV output.
 *
 *   ddmodem-plot curves --in sweep.csv [--in more.csv ...] --out plot.svg [--metric ber|fer|mean_nmse_db]
 *   ddmodem-plot bench  --in bench.csv --out plot.svg
 *
 * Exit codes: 0 success, 1 bad input (schema violation, unreadable file,
 * bad arguments).
 */

import { readFileSync, renameSync, writeFileSync } from "node:fs";
import { basename, dirname, join } from "node:path";
import { benchSeries, metricAxis, SWEEP_METRICS, sweepSeries, type SweepMetric } from "./plot.js";
import { parseBenchCsv, parseSweepCsv, SchemaError } from "./schema.js";
import { renderChart } from "./svg.js";

interface Args {
  command: "curves" | "bench";
  inputs: string[];
  out: string;
  metric: SweepMetric;
}

const USAGE =
  "usage: ddmodem-plot curves --in SWEEP.csv [--in MORE.csv ...] --out PLOT.svg [--metric ber|fer|mean_nmse_db]\n" +
  "       ddmodem-plot bench  --in BENCH.csv --out PLOT.svg";

export function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (command !== "curves" && command !== "bench") {
    throw new SchemaError(`unknown command "${command ?? ""}"\n${USAGE}`);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let metric: SweepMetric = "ber";
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (flag === "--in" || flag === "--out" || flag === "--metric") {
      if (value === undefined) throw new SchemaError(`${flag} needs a value\n${USAGE}`);
      i++;
    }
    if (flag === "--in") {
      inputs.push(value!);
    } else if (flag === "--out") {
      out = value;
    } else if (flag === "--metric") {
      if (!(SWEEP_METRICS as readonly string[]).includes(value!)) {
        throw new SchemaError(`--metric must be one of ${SWEEP_METRICS.join(", ")}`);
      }
      metric = value as SweepMetric;
    } else {
      throw new SchemaError(`unknown argument "${flag}"\n${USAGE}`);
    }
  }
  if (inputs.length === 0) throw new SchemaError(`at least one --in is required\n${USAGE}`);
  if (out === undefined) throw new SchemaError(`--out is required\n${USAGE}`);
  if (command === "bench" && inputs.length > 1) {
    throw new SchemaError("bench takes exactly one --in file");
  }
  return { command, inputs, out, metric };
}

/** Write via a sibling temp file and rename so readers never see a partial SVG. */
export function writeAtomic(path: string, content: string): void {
  const tmp = join(dirname(path), `.${basename(path)}.tmp-${process.pid}`);
  writeFileSync(tmp, content);
  renameSync(tmp, path);
}

export function run(argv: string[]): void {
  const args = parseArgs(argv);
  let svg: string;
  if (args.command === "curves") {
    const named = args.inputs.map((path) => ({
      name: path,
      rows: parseSweepCsv(readFileSync(path, "utf8"), path),
    }));
    const axis = metricAxis(args.metric);
    svg = renderChart(sweepSeries(named, args.metric), {
      title: `${axis.label} vs SNR`,
      xLabel: "SNR (dB)",
      yLabel: axis.label,
      logY: axis.logY,
    });
  } else {
    const rows = parseBenchCsv(readFileSync(args.inputs[0], "utf8"), args.inputs[0]);
    svg = renderChart(benchSeries(rows), {
      title: "runtime vs delay bins",
      xLabel: "delay bins M",
      yLabel: "median seconds",
      logY: true,
    });
  }
  writeAtomic(args.out, svg);
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  try {
    run(process.argv.slice(2));
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException)?.code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      process.exit(1);
    }
    throw err;
  }
}
