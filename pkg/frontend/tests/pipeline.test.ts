/**
 * End-to-end acceptance: generate real CSVs with the simulation CLI, render
 * both figures through the plots/ entry points, and check that the decay
 * figure embeds the summary slopes exactly.
 */

import { execFileSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join, resolve } from "path";
import { describe, expect, it } from "vitest";

const FRONTEND = resolve(__dirname, "..");
const WORK = mkdtempSync(join(tmpdir(), "dampwave-plots-"));

const RUN_CONFIG = `
model.n = 1
model.a0 = 1.0
model.alpha = 0.0
model.beta = 0.0
model.p = 4.0
model.sign = none
model.delta = 0.1
grid.mode = radial
grid.r_max = 210.0
grid.nr = 840
grid.cfl = 0.8
grid.t_end = 200.0
grid.record_every = 1.0
data.family = gaussian
data.amplitude = 1e-3
data.width = 1.0
run.rho = 0.3
`;

const SWEEP_CONFIG = RUN_CONFIG.replace("model.sign = none", "model.sign = plus-abs")
  .replace("grid.r_max = 210.0", "grid.r_max = 70.0")
  .replace("grid.nr = 840", "grid.nr = 280")
  .replace("grid.t_end = 200.0", "grid.t_end = 60.0");

function python(args: string[]): void {
  const env = { ...process.env };
  delete env.DAMPWAVE_OUT;
  execFileSync("python3", ["-m", "dampwave", ...args], { env, stdio: "pipe" });
}

function plot(script: string, args: string[]): string {
  return execFileSync(join(FRONTEND, "plots", script), args, { stdio: "pipe" }).toString();
}

function keyValue(path: string, key: string): string {
  for (const line of readFileSync(path, "utf8").split("\n")) {
    const [k, v] = line.split(",");
    if (k === key) return v;
  }
  throw new Error(`${key} not found in ${path}`);
}

describe("figure pipeline on real simulation output", () => {
  it("renders the decay figure with exact summary slopes", { timeout: 120_000 }, () => {
    const cfg = join(WORK, "run.cfg");
    writeFileSync(cfg, RUN_CONFIG);
    python(["run", "--config", cfg, "--out", WORK]);
    const series = join(WORK, "series.csv");
    const summary = join(WORK, "summary.csv");
    expect(existsSync(series) && existsSync(summary)).toBe(true);

    const out = join(WORK, "decay.svg");
    plot("decay", [series, summary, out]);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg")).toBe(true);
    const refL2 = keyValue(summary, "reference_slope_weighted_l2");
    const refEn = keyValue(summary, "reference_slope_weighted_energy");
    expect(refL2).not.toBe("");
    expect(svg).toContain(`reference slope weighted_l2 = ${refL2}`);
    expect(svg).toContain(`reference slope weighted_energy = ${refEn}`);

    // deterministic: a second render is byte-identical
    const out2 = join(WORK, "decay2.svg");
    plot("decay", [series, summary, out2]);
    expect(readFileSync(out2, "utf8")).toBe(svg);
  });

  it("renders the sweep figure with both outcomes straddling p_c", { timeout: 240_000 }, () => {
    const cfg = join(WORK, "sweep.cfg");
    writeFileSync(cfg, SWEEP_CONFIG);
    python(["sweep", "--config", cfg, "--p", "2,4", "--amp", "1e-3,5", "--out", WORK]);
    python([
      "audit", "--n", "1", "--a0", "1.0", "--alpha", "0.0", "--beta", "0.0",
      "--delta", "0.1", "--p", "4.0", "--out", WORK,
    ]);
    const sweep = join(WORK, "sweep.csv");
    const constants = join(WORK, "constants.csv");
    const rows = readFileSync(sweep, "utf8").trim().split("\n");
    expect(rows.length).toBe(5); // header + 2x2 grid
    expect(keyValue(constants, "p_c")).toBe("3.0");

    const out = join(WORK, "sweep.svg");
    plot("sweep", [sweep, constants, out]);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain('data-status="global"');
    expect(svg).toContain('data-status="blow-up"');
    expect(svg).toContain("p_c = 3.0");
  });

  it("fails cleanly on a zero-data series", () => {
    const series = join(WORK, "zero_series.csv");
    const header =
      "t,l2,weighted_l2,energy,weighted_energy,j_abu2,e_psi,region_energy," +
      "m_partial1,m_partial2,max_abs_u,boundary_ratio";
    writeFileSync(series, `${header}\n0.0,0,0,0,0,0,0,0,0,0,0,0\n`);
    const summary = join(WORK, "summary.csv");
    let failed = false;
    try {
      plot("decay", [series, summary, join(WORK, "nope.svg")]);
    } catch (err: any) {
      failed = true;
      expect(String(err.stderr)).toContain("no positive samples");
    }
    expect(failed).toBe(true);
  });
});
