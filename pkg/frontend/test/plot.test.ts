import { describe, expect, it } from "vitest";
import { benchSeries, sweepSeries } from "../src/plot.js";
import { parseBenchCsv, parseSweepCsv } from "../src/schema.js";
import { renderChart } from "../src/svg.js";
import { BENCH_CSV, SINGLE_ROW_SWEEP, SWEEP_CSV, SWEEP_CSV_IDEAL } from "./fixtures.js";

describe("sweepSeries", () => {
  it("groups one series per estimator+equalizer pair", () => {
    const rows = parseSweepCsv(SWEEP_CSV);
    const series = sweepSeries([{ name: "a.csv", rows }], "ber");
    expect(series.map((s) => s.label)).toEqual(["proposed+wiener", "pn+wiener"]);
    expect(series[0].points).toHaveLength(4);
    expect(series[1].points).toHaveLength(4);
  });

  it("keeps input point order without sorting", () => {
    const rows = parseSweepCsv(SWEEP_CSV).reverse();
    const series = sweepSeries([{ name: "a.csv", rows }], "ber");
    expect(series[0].points.map((p) => p.x)).toEqual([30, 20, 10, 0]);
  });

  it("prefixes labels with the file name when given multiple inputs", () => {
    const series = sweepSeries(
      [
        { name: "runs/a.csv", rows: parseSweepCsv(SWEEP_CSV) },
        { name: "runs/b.csv", rows: parseSweepCsv(SWEEP_CSV_IDEAL) },
      ],
      "ber",
    );
    expect(series.map((s) => s.label)).toEqual([
      "a.csv: proposed+wiener",
      "a.csv: pn+wiener",
      "b.csv: ideal+mmse",
    ]);
  });

  it("selects the requested metric", () => {
    const rows = parseSweepCsv(SWEEP_CSV);
    const series = sweepSeries([{ name: "a", rows }], "mean_nmse_db");
    expect(series[0].points.map((p) => p.y)).toEqual([-12.5, -22.1, -23.9, -24.2]);
  });
});

describe("benchSeries", () => {
  it("groups 2 methods x 3 sizes into 2 series of 3 points", () => {
    const series = benchSeries(parseBenchCsv(BENCH_CSV));
    expect(series.map((s) => s.label)).toEqual(["proposed_ce", "mmse_eq"]);
    for (const s of series) {
      expect(s.points.map((p) => p.x)).toEqual([64, 128, 256]);
    }
  });
});

describe("renderChart", () => {
  it("renders a well-formed SVG with one polyline per series and a legend", () => {
    const rows = parseSweepCsv(SWEEP_CSV);
    const svg = renderChart(sweepSeries([{ name: "a", rows }], "ber"), {
      title: "ber vs SNR",
      xLabel: "SNR (dB)",
      yLabel: "bit error rate",
      logY: true,
    });
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
    expect(svg.match(/<polyline /g)).toHaveLength(2);
    expect(svg).toContain("proposed+wiener");
    expect(svg).toContain("pn+wiener");
  });

  it("does not crash on a single-point series", () => {
    const rows = parseSweepCsv(SINGLE_ROW_SWEEP);
    const svg = renderChart(sweepSeries([{ name: "a", rows }], "ber"), {
      title: "t",
      xLabel: "x",
      yLabel: "y",
      logY: true,
    });
    expect(svg).toContain("<circle");
    expect(svg).not.toContain("NaN");
  });

  it("drops zero values on a log axis instead of emitting NaN", () => {
    const svg = renderChart(
      [
        {
          label: "s",
          points: [
            { x: 0, y: 0.1 },
            { x: 10, y: 0 },
            { x: 20, y: 0.001 },
          ],
        },
      ],
      { title: "t", xLabel: "x", yLabel: "y", logY: true },
    );
    expect(svg).not.toContain("NaN");
    expect(svg.match(/<circle /g)).toHaveLength(2);
  });

  it("escapes markup in labels", () => {
    const svg = renderChart(
      [{ label: "<b>&x", points: [{ x: 0, y: 1 }, { x: 1, y: 2 }] }],
      { title: "a<b", xLabel: "x", yLabel: "y", logY: false },
    );
    expect(svg).toContain("&lt;b&gt;&amp;x");
    expect(svg).toContain("a&lt;b");
  });
});
