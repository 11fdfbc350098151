/**
 * Log-log decay figure: weighted_l2 and weighted_energy against (1+t), with
 * dashed reference-slope lines anchored at the fit-window start.  Every
 * displayed number comes from series.csv or summary.csv; the slope labels
 * embed the summary strings verbatim.
 */

import { Frame, Svg, drawLogAxes, xPixel, yPixel } from "./svg";
import { Table, keyValues, numericColumn, requireKey } from "./csv";

const LOG10 = Math.log(10);

function log10(v: number): number {
  return Math.log(v) / LOG10;
}

interface Curve {
  name: string;
  color: string;
  points: Array<[number, number]>; // (log10(1+t), log10(value))
  refSlopeRaw: string; // verbatim from summary.csv
}

export function buildDecayFigure(series: Table, summary: Table): string {
  const t = numericColumn(series, "t");
  const summaryMap = keyValues(summary);
  const fitLo = Number(requireKey(summaryMap, "fit_t_lo"));

  const curves: Curve[] = [];
  for (const [name, color, refKey] of [
    ["weighted_l2", "#1f77b4", "reference_slope_weighted_l2"],
    ["weighted_energy", "#d62728", "reference_slope_weighted_energy"],
  ] as const) {
    const values = numericColumn(series, name);
    const points: Array<[number, number]> = [];
    for (let i = 0; i < t.length; i++) {
      if (values[i] > 0) {
        points.push([log10(1 + t[i]), log10(values[i])]);
      }
    }
    curves.push({ name, color, points, refSlopeRaw: requireKey(summaryMap, refKey) });
  }
  if (curves.every((c) => c.points.length === 0)) {
    throw new Error("no positive samples in series");
  }

  const xs = curves.flatMap((c) => c.points.map((p) => p[0]));
  const ys = curves.flatMap((c) => c.points.map((p) => p[1]));
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs) + 0.05;
  const y0 = Math.min(...ys) - 0.3;
  const y1 = Math.max(...ys) + 0.3;

  const svg = new Svg(640, 480);
  const frame: Frame = { left: 70, top: 50, width: 520, height: 360, x0, x1, y0, y1 };
  drawLogAxes(svg, frame, "1+t", "functional value");

  const title = ["n", "alpha", "beta", "p"]
    .map((k) => `${k}=${summaryMap.get(k) ?? "?"}`)
    .join(" ");
  svg.text(frame.left + 80, 20, `weighted decay: ${title}`);

  let legendY = 36;
  for (const curve of curves) {
    if (curve.points.length > 0) {
      svg.polyline(
        curve.points.map(([x, y]) => [xPixel(frame, x), yPixel(frame, y)]),
        curve.color,
        ` stroke-width="1.5" data-curve="${curve.name}"`
      );
      // dashed reference line from the first sample at t >= fit_t_lo
      const anchorLog = log10(1 + fitLo);
      const anchor = curve.points.find(([x]) => x >= anchorLog - 1e-12);
      if (anchor) {
        const slope = Number(curve.refSlopeRaw);
        const [xa, ya] = anchor;
        const yEnd = ya + slope * (x1 - xa);
        svg.line(
          xPixel(frame, xa),
          yPixel(frame, ya),
          xPixel(frame, x1),
          yPixel(frame, yEnd),
          curve.color,
          ` stroke-dasharray="6 4" data-reference="${curve.name}"`
        );
      }
    }
    svg.text(
      frame.left + 150,
      legendY,
      `reference slope ${curve.name} = ${curve.refSlopeRaw}`,
      ` fill="${curve.color}"`
    );
    legendY += 14;
  }
  return svg.render();
}
