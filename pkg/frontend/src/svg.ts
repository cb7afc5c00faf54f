/** Dependency-free SVG chart primitives with deterministic output. */

export const WIDTH = 860;
export const HEIGHT = 560;
const MARGIN = { left: 78, right: 24, top: 36, bottom: 58 };
const COLORS = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
];

export interface Series {
  x: number[];
  y: number[];
  label: string;
  dashed?: boolean;
}

export interface LineChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((c) => c * mag);
  const step = candidates.find((c) => span / c <= n) ?? candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) ticks.push(v);
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

export function lineChart(series: Series[], opts: LineChartOptions): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const pts = series.flatMap((s) =>
    s.x.map((x, i) => ({ x, y: s.y[i] })).filter((p) => isFinite(p.x) && isFinite(p.y)),
  );
  if (pts.length === 0) throw new Error("nothing to plot");
  const tx = (v: number) => v;
  const ty = opts.logY ? (v: number) => Math.log10(Math.max(v, 1e-300)) : (v: number) => v;
  const xs = pts.map((p) => tx(p.x));
  const ys = pts.filter((p) => !opts.logY || p.y > 0).map((p) => ty(p.y));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (yHi === yLo) {
    yHi += 1;
    yLo -= 1;
  }
  const px = (x: number) => MARGIN.left + ((tx(x) - xLo) / (xHi - xLo || 1)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - ((ty(y) - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16">${esc(opts.title)}</text>`,
  );
  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${MARGIN.top}" x2="${x.toFixed(1)}" y2="${MARGIN.top + plotH}" stroke="#eee"/>`,
      `<text x="${x.toFixed(1)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  const yTicks = opts.logY
    ? Array.from(
        { length: Math.floor(yHi) - Math.ceil(yLo) + 1 },
        (_, i) => Math.ceil(yLo) + i,
      )
    : niceTicks(yLo, yHi);
  for (const t of yTicks) {
    const y = MARGIN.top + plotH - ((t - yLo) / (yHi - yLo)) * plotH;
    const labelVal = opts.logY ? `1e${t}` : fmt(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(1)}" x2="${MARGIN.left + plotW}" y2="${y.toFixed(1)}" stroke="#eee"/>`,
      `<text x="${MARGIN.left - 8}" y="${(y + 4).toFixed(1)}" text-anchor="end" font-size="11">${labelVal}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  series.forEach((s, k) => {
    const color = COLORS[k % COLORS.length];
    const d = s.x
      .map((x, i) => ({ x, y: s.y[i] }))
      .filter((p) => isFinite(p.x) && isFinite(p.y) && (!opts.logY || p.y > 0))
      .map((p, i) => `${i === 0 ? "M" : "L"}${px(p.x).toFixed(2)},${py(p.y).toFixed(2)}`)
      .join(" ");
    const dash = s.dashed ? ` stroke-dasharray="6,4"` : "";
    parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`);
    const ly = MARGIN.top + 16 + 16 * k;
    parts.push(
      `<line x1="${MARGIN.left + plotW - 150}" y1="${ly - 4}" x2="${MARGIN.left + plotW - 122}" y2="${ly - 4}" stroke="${color}" stroke-width="2"${dash}/>`,
      `<text x="${MARGIN.left + plotW - 116}" y="${ly}" font-size="12">${esc(s.label)}</text>`,
    );
  });
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 16}" text-anchor="middle" font-size="13">${esc(opts.xLabel)}</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`,
    "</svg>",
  );
  return parts.join("\n");
}

export interface HeatmapOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  /** symmetric diverging map centered at 0 (Wigner) vs sequential */
  diverging?: boolean;
  logColor?: boolean;
}

function divergingColor(t: number): string {
  // t in [-1, 1]: blue -> white -> red
  const u = Math.max(-1, Math.min(1, t));
  const r = u >= 0 ? 255 : Math.round(255 * (1 + u));
  const b = u <= 0 ? 255 : Math.round(255 * (1 - u));
  const g = Math.round(255 * (1 - Math.abs(u)));
  return `rgb(${r},${g},${b})`;
}

function sequentialColor(t: number): string {
  const u = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 215 * u);
  const g = Math.round(20 + 120 * u);
  const b = Math.round(90 + 40 * (1 - u));
  return `rgb(${r},${g},${b})`;
}

/** Heatmap over the rectangular grid implied by (x, y, value) triples. */
export function heatmap(
  x: number[],
  y: number[],
  v: number[],
  opts: HeatmapOptions,
): string {
  const xsU = Array.from(new Set(x)).sort((a, b) => a - b);
  const ysU = Array.from(new Set(y)).sort((a, b) => a - b);
  const plotW = WIDTH - 110 - 80;
  const plotH = HEIGHT - 100;
  const x0 = 90;
  const y0 = 40;
  const cw = plotW / xsU.length;
  const ch = plotH / ysU.length;
  const xi = new Map(xsU.map((val, i) => [val, i]));
  const yi = new Map(ysU.map((val, i) => [val, i]));
  const vals = v.filter((q) => isFinite(q));
  const transform = (q: number) =>
    opts.logColor ? Math.log10(Math.max(Math.abs(q), 1e-300)) : q;
  const tv = vals.map(transform);
  const vmax = Math.max(...tv);
  const vmin = Math.min(...tv);
  const scaleDiv = Math.max(Math.abs(Math.max(...vals)), Math.abs(Math.min(...vals)), 1e-300);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(opts.title)}</text>`,
  );
  for (let k = 0; k < v.length; k++) {
    if (!isFinite(v[k])) continue;
    const i = xi.get(x[k])!;
    const j = yi.get(y[k])!;
    const color = opts.diverging
      ? divergingColor(v[k] / scaleDiv)
      : sequentialColor((transform(v[k]) - vmin) / (vmax - vmin || 1));
    const cx = x0 + i * cw;
    const cy = y0 + plotH - (j + 1) * ch;
    parts.push(
      `<rect x="${cx.toFixed(2)}" y="${cy.toFixed(2)}" width="${(cw + 0.5).toFixed(2)}" height="${(ch + 0.5).toFixed(2)}" fill="${color}"/>`,
    );
  }
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  for (const t of niceTicks(xsU[0], xsU[xsU.length - 1], 7)) {
    const px = x0 + ((t - xsU[0]) / (xsU[xsU.length - 1] - xsU[0] || 1)) * plotW;
    parts.push(
      `<text x="${px.toFixed(1)}" y="${y0 + plotH + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(ysU[0], ysU[ysU.length - 1], 7)) {
    const py = y0 + plotH - ((t - ysU[0]) / (ysU[ysU.length - 1] - ysU[0] || 1)) * plotH;
    parts.push(
      `<text x="${x0 - 8}" y="${(py + 4).toFixed(1)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">${esc(opts.xLabel)}</text>`,
    `<text x="24" y="${y0 + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 24 ${y0 + plotH / 2})">${esc(opts.yLabel)}</text>`,
    "</svg>",
  );
  return parts.join("\n");
}
