/**
 * Minimal deterministic SVG chart assembly. No dependencies; identical
 * inputs always produce identical bytes.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dashed?: boolean;
}

export interface PanelSpec {
  title: string;
  series: Series[];
  yLabel?: string;
}

const PALETTE = ["#1f6fb2", "#d1495b", "#3a9e63", "#8a5fb0", "#c98a1e", "#4b4f56"];

const PANEL_W = 640;
const PANEL_H = 220;
const MARGIN = { top: 34, right: 16, bottom: 34, left: 64 };

/** Stable short decimal form; pure function of the value. */
export function fmt(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate: ${value}`);
  }
  if (value === 0) {
    return "0";
  }
  return String(parseFloat(value.toPrecision(8)));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) {
    throw new Error("empty series");
  }
  if (lo === hi) {
    // flat series: pad so the line sits mid-panel
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.06;
  return [lo - pad, hi + pad];
}

function ticks(lo: number, hi: number, n: number): number[] {
  const out: number[] = [];
  for (let i = 0; i <= n; i++) {
    out.push(lo + ((hi - lo) * i) / n);
  }
  return out;
}

function renderPanel(spec: PanelSpec, yOffset: number): string {
  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y);
  const [x0, x1] = extent(xs);
  const [y0, y1] = extent(ys);
  const plotW = PANEL_W - MARGIN.left - MARGIN.right;
  const plotH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW;
  const sy = (y: number) => yOffset + MARGIN.top + plotH - ((y - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<text x="${fmt(MARGIN.left)}" y="${fmt(yOffset + 20)}" class="title">${esc(spec.title)}</text>`,
  );
  parts.push(
    `<rect x="${fmt(MARGIN.left)}" y="${fmt(yOffset + MARGIN.top)}" width="${fmt(plotW)}" height="${fmt(plotH)}" class="frame"/>`,
  );
  for (const t of ticks(y0, y1, 4)) {
    const py = sy(t);
    parts.push(
      `<line x1="${fmt(MARGIN.left)}" y1="${fmt(py)}" x2="${fmt(MARGIN.left + plotW)}" y2="${fmt(py)}" class="grid"/>`,
    );
    parts.push(
      `<text x="${fmt(MARGIN.left - 6)}" y="${fmt(py + 3.5)}" class="tick" text-anchor="end">${esc(fmt(parseFloat(t.toPrecision(3))))}</text>`,
    );
  }
  for (const t of ticks(x0, x1, 6)) {
    const px = sx(t);
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(yOffset + MARGIN.top + plotH + 16)}" class="tick" text-anchor="middle">${esc(fmt(parseFloat(t.toPrecision(3))))}</text>`,
    );
  }
  spec.series.forEach((s, i) => {
    if (s.x.length !== s.y.length) {
      throw new Error(`series "${s.label}": x and y lengths differ`);
    }
    const color = s.color ?? PALETTE[i % PALETTE.length]!;
    const pts = s.x.map((x, j) => `${fmt(sx(x))},${fmt(sy(s.y[j]!))}`).join(" ");
    const dash = s.dashed ? ` stroke-dasharray="5,4"` : "";
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.6"${dash} data-series="${esc(s.label)}"/>`,
    );
    const lx = MARGIN.left + plotW - 8;
    const ly = yOffset + MARGIN.top + 14 + i * 15;
    parts.push(
      `<line x1="${fmt(lx - 26)}" y1="${fmt(ly - 4)}" x2="${fmt(lx - 8)}" y2="${fmt(ly - 4)}" stroke="${color}" stroke-width="1.6"${dash}/>`,
    );
    parts.push(
      `<text x="${fmt(lx - 30)}" y="${fmt(ly)}" class="legend" text-anchor="end">${esc(s.label)}</text>`,
    );
  });
  if (spec.yLabel) {
    parts.push(
      `<text x="12" y="${fmt(yOffset + MARGIN.top + plotH / 2)}" class="tick" transform="rotate(-90 12 ${fmt(yOffset + MARGIN.top + plotH / 2)})" text-anchor="middle">${esc(spec.yLabel)}</text>`,
    );
  }
  return parts.join("\n");
}

/** Stack panels vertically into one standalone SVG document. */
export function figure(panels: PanelSpec[]): string {
  const height = panels.length * PANEL_H;
  const body = panels.map((p, i) => renderPanel(p, i * PANEL_H)).join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL_W}" height="${height}" viewBox="0 0 ${PANEL_W} ${height}">`,
    `<style>`,
    `text { font-family: Helvetica, Arial, sans-serif; fill: #222; }`,
    `.title { font-size: 13px; font-weight: bold; }`,
    `.tick { font-size: 10px; fill: #555; }`,
    `.legend { font-size: 11px; }`,
    `.frame { fill: none; stroke: #888; stroke-width: 1; }`,
    `.grid { stroke: #ddd; stroke-width: 0.5; }`,
    `</style>`,
    `<rect width="100%" height="100%" fill="#ffffff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}

/** Binary sample grid rendered as filled cells. */
export function sampleGrid(
  samples: number[][],
  shape: [number, number],
  title: string,
): string {
  const [rows, cols] = shape;
  const cell = 10;
  const gap = 6;
  const perRow = Math.max(1, Math.ceil(Math.sqrt(samples.length)));
  const tileW = cols * cell + gap;
  const tileH = rows * cell + gap;
  const gridRows = Math.ceil(samples.length / perRow);
  const width = perRow * tileW + gap + 2 * gap;
  const height = gridRows * tileH + gap + 30 + gap;
  const parts: string[] = [];
  parts.push(`<text x="${gap * 2}" y="20" class="title">${esc(title)}</text>`);
  samples.forEach((sample, s) => {
    const bx = 2 * gap + (s % perRow) * tileW;
    const by = 30 + Math.floor(s / perRow) * tileH;
    parts.push(
      `<rect x="${bx - 1}" y="${by - 1}" width="${cols * cell + 2}" height="${rows * cell + 2}" class="frame"/>`,
    );
    sample.forEach((bit, i) => {
      if (bit === 1) {
        const cx = bx + (i % cols) * cell;
        const cy = by + Math.floor(i / cols) * cell;
        parts.push(
          `<rect x="${cx}" y="${cy}" width="${cell}" height="${cell}" fill="#222" data-cell="1"/>`,
        );
      }
    });
  });
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<style>`,
    `text { font-family: Helvetica, Arial, sans-serif; fill: #222; }`,
    `.title { font-size: 13px; font-weight: bold; }`,
    `.frame { fill: none; stroke: #888; stroke-width: 1; }`,
    `</style>`,
    `<rect width="100%" height="100%" fill="#ffffff"/>`,
    parts.join("\n"),
    `</svg>`,
    ``,
  ].join("\n");
}
