import { describe, expect, it } from "vitest";

import { parseCsv } from "../src/csv";
import { buildDecayFigure } from "../src/decay";

function seriesCsv(rows: Array<[number, number, number]>): string {
  const header =
    "t,l2,weighted_l2,energy,weighted_energy,j_abu2,e_psi,region_energy," +
    "m_partial1,m_partial2,max_abs_u,boundary_ratio";
  const body = rows
    .map(([t, wl2, wen]) => `${t},0.0,${wl2},0.0,${wen},0.0,0.0,0.0,0.0,0.0,0.0,0.0`)
    .join("\n");
  return `${header}\n${body}\n`;
}

function summaryCsv(slopeL2: string, slopeEn: string): string {
  const entries: Array<[string, string]> = [
    ["n", "1"],
    ["alpha", "0.0"],
    ["beta", "0.0"],
    ["p", "4.0"],
    ["fit_t_lo", "10.0"],
    ["fit_t_hi", "100.0"],
    ["reference_slope_weighted_l2", slopeL2],
    ["reference_slope_weighted_energy", slopeEn],
  ];
  return "key,value\n" + entries.map(([k, v]) => `${k},${v}`).join("\n") + "\n";
}

function syntheticSeries(slope: number): string {
  const rows: Array<[number, number, number]> = [];
  for (let t = 0; t <= 100; t += 1) {
    rows.push([t, Math.pow(1 + t, slope), Math.pow(1 + t, slope - 1)]);
  }
  return seriesCsv(rows);
}

describe("decay figure", () => {
  it("embeds the summary slope strings verbatim", () => {
    const svg = buildDecayFigure(
      parseCsv(syntheticSeries(-1.5)),
      parseCsv(summaryCsv("-1.4642857142857143", "-2.4642857142857143"))
    );
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("reference slope weighted_l2 = -1.4642857142857143");
    expect(svg).toContain("reference slope weighted_energy = -2.4642857142857143");
    expect(svg).toContain('data-curve="weighted_l2"');
    expect(svg).toContain('data-reference="weighted_energy"');
  });

  it("renders a power-law series parallel to its reference line", () => {
    const svg = buildDecayFigure(
      parseCsv(syntheticSeries(-1.5)),
      parseCsv(summaryCsv("-1.5", "-2.5"))
    );
    const poly = svg.match(/<polyline points="([^"]+)"[^>]*data-curve="weighted_l2"/);
    expect(poly).not.toBeNull();
    const pts = poly![1].split(" ").map((pair) => pair.split(",").map(Number));
    const [xa, ya] = pts[0];
    const [xb, yb] = pts[pts.length - 1];
    const dataSlope = (yb - ya) / (xb - xa);
    const ref = svg.match(
      /<line x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)"[^>]*data-reference="weighted_l2"/
    );
    expect(ref).not.toBeNull();
    const refSlope =
      (Number(ref![4]) - Number(ref![2])) / (Number(ref![3]) - Number(ref![1]));
    expect(Math.abs(dataSlope - refSlope)).toBeLessThan(0.02 * Math.abs(refSlope));
  });

  it("rejects a series with no positive samples", () => {
    const rows: Array<[number, number, number]> = [
      [0, 0, 0],
      [1, 0, 0],
    ];
    expect(() =>
      buildDecayFigure(parseCsv(seriesCsv(rows)), parseCsv(summaryCsv("-1.5", "-2.5")))
    ).toThrow(/no positive samples/);
  });

  it("rejects a series with missing columns", () => {
    const broken = "t,l2\n0.0,1.0\n";
    expect(() =>
      buildDecayFigure(parseCsv(broken), parseCsv(summaryCsv("-1.5", "-2.5")))
    ).toThrow(/missing column 'weighted_l2'/);
  });

  it("is deterministic", () => {
    const build = () =>
      buildDecayFigure(
        parseCsv(syntheticSeries(-0.5)),
        parseCsv(summaryCsv("-0.5", "-1.5"))
      );
    expect(build()).toBe(build());
  });
});
