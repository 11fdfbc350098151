/**
 * Minimal deterministic SVG scene builder.  Coordinates are printed with a
 * fixed number of decimals and nothing time- or environment-dependent is
 * embedded, so identical inputs render byte-identical files.
 */

export function fmt(v: number): string {
  return v.toFixed(2);
}

export interface Frame {
  left: number;
  top: number;
  width: number;
  height: number;
  x0: number; // data range mapped onto the frame
  x1: number;
  y0: number;
  y1: number;
}

export function xPixel(f: Frame, x: number): number {
  return f.left + ((x - f.x0) / (f.x1 - f.x0)) * f.width;
}

export function yPixel(f: Frame, y: number): number {
  return f.top + f.height - ((y - f.y0) / (f.y1 - f.y0)) * f.height;
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number
  ) {}

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, extra = ""): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}"${extra}/>`
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, extra = ""): void {
    const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}"${extra}/>`
    );
  }

  circle(x: number, y: number, r: number, fill: string, extra = ""): void {
    this.parts.push(
      `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"${extra}/>`
    );
  }

  cross(x: number, y: number, s: number, stroke: string, extra = ""): void {
    this.parts.push(
      `<g stroke="${stroke}"${extra}>` +
        `<line x1="${fmt(x - s)}" y1="${fmt(y - s)}" x2="${fmt(x + s)}" y2="${fmt(y + s)}"/>` +
        `<line x1="${fmt(x - s)}" y1="${fmt(y + s)}" x2="${fmt(x + s)}" y2="${fmt(y - s)}"/>` +
        `</g>`
    );
  }

  text(x: number, y: number, content: string, extra = ""): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="monospace" font-size="11"${extra}>${escapeXml(content)}</text>`
    );
  }

  frameBox(f: Frame): void {
    this.parts.push(
      `<rect x="${fmt(f.left)}" y="${fmt(f.top)}" width="${fmt(f.width)}" height="${fmt(f.height)}" fill="none" stroke="black"/>`
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Integer decades covered by [lo, hi] (log10 data coordinates). */
export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let d = Math.ceil(lo); d <= Math.floor(hi); d++) {
    ticks.push(d);
  }
  return ticks;
}

export function decadeLabel(d: number): string {
  return `1e${d}`;
}

/** log-log axes with decade ticks on both sides. */
export function drawLogAxes(svg: Svg, f: Frame, xLabel: string, yLabel: string): void {
  svg.frameBox(f);
  for (const d of decadeTicks(f.x0, f.x1)) {
    const px = xPixel(f, d);
    svg.line(px, f.top + f.height, px, f.top + f.height + 4, "black");
    svg.text(px - 10, f.top + f.height + 16, decadeLabel(d));
  }
  for (const d of decadeTicks(f.y0, f.y1)) {
    const py = yPixel(f, d);
    svg.line(f.left - 4, py, f.left, py, "black");
    svg.text(f.left - 38, py + 4, decadeLabel(d));
  }
  svg.text(f.left + f.width / 2 - 20, f.top + f.height + 32, xLabel);
  svg.text(10, f.top - 8, yLabel);
}
