/**
 * Sweep classification map: one marker per (p, amplitude) row, filled circles
 * for global rows, crosses for blow-up, open squares for invalid, with a
 * dashed vertical line at the critical exponent from constants.csv.
 */

import { Frame, Svg, decadeLabel, decadeTicks, fmt, xPixel, yPixel } from "./svg";
import { Table, columnIndex, keyValues, requireKey } from "./csv";

const LOG10 = Math.log(10);

function log10(v: number): number {
  return Math.log(v) / LOG10;
}

export function buildSweepFigure(sweep: Table, constants: Table): string {
  if (sweep.rows.length === 0) {
    throw new Error("empty sweep: no rows to plot");
  }
  const ip = columnIndex(sweep, "p");
  const iamp = columnIndex(sweep, "amplitude");
  const istatus = columnIndex(sweep, "status");
  const pcRaw = requireKey(keyValues(constants), "p_c");
  const pc = Number(pcRaw);

  const ps = sweep.rows.map((row) => Number(row[ip]));
  const amps = sweep.rows.map((row) => Number(row[iamp]));
  const posAmps = amps.filter((a) => a > 0);
  const ampFloor = posAmps.length > 0 ? Math.min(...posAmps) : 1.0;

  const x0 = Math.min(...ps, pc) - 0.5;
  const x1 = Math.max(...ps, pc) + 0.5;
  const y0 = log10(ampFloor) - 0.5;
  const y1 = (posAmps.length > 0 ? Math.max(...posAmps.map(log10)) : 0) + 0.5;

  const svg = new Svg(640, 480);
  const frame: Frame = { left: 70, top: 50, width: 520, height: 360, x0, x1, y0, y1 };
  svg.frameBox(frame);
  for (const d of decadeTicks(y0, y1)) {
    const py = yPixel(frame, d);
    svg.line(frame.left - 4, py, frame.left, py, "black");
    svg.text(frame.left - 38, py + 4, decadeLabel(d));
  }
  for (const p of Array.from(new Set(ps)).sort((a, b) => a - b)) {
    const px = xPixel(frame, p);
    svg.line(px, frame.top + frame.height, px, frame.top + frame.height + 4, "black");
    svg.text(px - 8, frame.top + frame.height + 16, String(p));
  }
  svg.text(frame.left + frame.width / 2 - 40, frame.top + frame.height + 32, "nonlinearity power p");
  svg.text(10, frame.top - 8, "amplitude");
  svg.text(frame.left + 100, 20, "sweep classification: global vs blow-up");

  const pcX = xPixel(frame, pc);
  svg.line(pcX, frame.top, pcX, frame.top + frame.height, "#444444",
    ` stroke-dasharray="4 4" data-pc="${pc}"`);
  svg.text(pcX + 4, frame.top + 14, `p_c = ${pcRaw}`);

  for (const row of sweep.rows) {
    const p = Number(row[ip]);
    const amp = Number(row[iamp]);
    const status = row[istatus];
    const x = xPixel(frame, p);
    const y = yPixel(frame, amp > 0 ? log10(amp) : y0);
    const tag = ` data-p="${row[ip]}" data-amp="${row[iamp]}" data-status="${status}"`;
    if (status === "global") {
      svg.circle(x, y, 6, "#2ca02c", tag);
    } else if (status === "blow-up") {
      svg.cross(x, y, 6, "#d62728", ` stroke-width="2"${tag}`);
    } else {
      svg.raw(
        `<rect x="${fmt(x - 5)}" y="${fmt(y - 5)}" width="10" height="10" ` +
          `fill="none" stroke="#7f7f7f"${tag}/>`
      );
    }
  }
  svg.text(frame.left, 36, "o global    x blow-up    [] invalid");
  return svg.render();
}
