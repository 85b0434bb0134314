/** SVG rendering of kernel plot documents.
 *
 * Vertex data is drawn exactly as delivered (no resampling); a hole flag
 * breaks the polyline so no segment bridges the gap.
 */

export const SUPPORTED_VERSION = 1;

export class UnsupportedPlotVersion extends Error {
  constructor(got: unknown) {
    super(`plot document version ${String(got)} needs a newer workbook (upgrade required)`);
  }
}

export interface Series {
  points: [number, number | null][];
  holes: boolean[];
  label: string;
  connected: boolean;
}

interface Bounds {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

const WIDTH = 640;
const HEIGHT = 420;
const PAD = 30;

const PALETTE = ["#1668b4", "#c23b21", "#1e8f4e", "#8b51c9", "#b8860b"];

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function seriesBounds(series: Series[]): Bounds {
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const s of series) {
    s.points.forEach(([x, y], i) => {
      if (s.holes[i] || y === null) return;
      x0 = Math.min(x0, x); x1 = Math.max(x1, x);
      y0 = Math.min(y0, y); y1 = Math.max(y1, y);
    });
  }
  if (!isFinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x0 === x1) { x0 -= 0.5; x1 += 0.5; }
  if (y0 === y1) { y0 -= 0.5; y1 += 0.5; }
  return { x0, x1, y0, y1 };
}

function project(b: Bounds): (x: number, y: number) => [number, number] {
  return (x, y) => [
    PAD + ((x - b.x0) / (b.x1 - b.x0)) * (WIDTH - 2 * PAD),
    HEIGHT - PAD - ((y - b.y0) / (b.y1 - b.y0)) * (HEIGHT - 2 * PAD),
  ];
}

/** One <path> segment per hole-free stretch of the polyline. */
export function polylineSegments(s: Series, b: Bounds): string[] {
  const proj = project(b);
  const segments: string[] = [];
  let current: string[] = [];
  s.points.forEach(([x, y], i) => {
    if (s.holes[i] || y === null) {
      if (current.length > 1) segments.push(current.join(" "));
      current = [];
      return;
    }
    const [px, py] = proj(x, y);
    current.push(`${current.length === 0 ? "M" : "L"}${px.toFixed(2)},${py.toFixed(2)}`);
  });
  if (current.length > 1) segments.push(current.join(" "));
  return segments;
}

function render2dSeries(series: Series[], bounds?: Bounds): string {
  const b = bounds ?? seriesBounds(series);
  const proj = project(b);
  const parts: string[] = [];
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    if (s.connected) {
      for (const d of polylineSegments(s, b)) {
        parts.push(`<path fill="none" stroke="${color}" stroke-width="1.5" d="${d}"/>`);
      }
    } else {
      s.points.forEach(([x, y], i) => {
        if (s.holes[i] || y === null) return;
        const [px, py] = proj(x, y);
        parts.push(`<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="3" fill="${color}"/>`);
      });
    }
    if (s.label) {
      parts.push(`<text x="${PAD + 4}" y="${PAD - 8 + 14 * idx}" fill="${color}" ` +
        `font-size="12">${esc(s.label)}</text>`);
    }
  });
  return parts.join("\n");
}

function heatColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 215 * clamped);
  const g = Math.round(50 + 120 * (1 - Math.abs(clamped - 0.5) * 2));
  const bl = Math.round(255 - 215 * clamped);
  return `rgb(${r},${g},${bl})`;
}

/** Grid of colored cells for one 2D slice of scalar values. */
export function heatmapCells(grid: (number | null)[][], x: number, y: number,
                             w: number, h: number): string[] {
  let lo = Infinity, hi = -Infinity;
  for (const row of grid) {
    for (const v of row) {
      if (v === null) continue;
      lo = Math.min(lo, v); hi = Math.max(hi, v);
    }
  }
  if (!isFinite(lo)) { lo = 0; hi = 1; }
  if (lo === hi) hi = lo + 1;
  const rows = grid.length;
  const cols = grid[0]?.length ?? 0;
  const cells: string[] = [];
  grid.forEach((row, i) => {
    row.forEach((v, j) => {
      if (v === null) return;
      const cx = x + (j / cols) * w;
      const cy = y + (i / rows) * h;
      cells.push(`<rect x="${cx.toFixed(2)}" y="${cy.toFixed(2)}" ` +
        `width="${(w / cols).toFixed(2)}" height="${(h / rows).toFixed(2)}" ` +
        `fill="${heatColor((v - lo) / (hi - lo))}"/>`);
    });
  });
  return cells;
}

function renderSurface(doc: Record<string, unknown>): string {
  const z = doc.z as (number | null)[][];
  return heatmapCells(z, PAD, PAD, WIDTH - 2 * PAD, HEIGHT - 2 * PAD).join("\n");
}

function renderParamSurface(doc: Record<string, unknown>): string {
  // project the (x, y, z) grid orthographically and draw the wire mesh
  const xs = doc.x as (number | null)[][];
  const ys = doc.y as (number | null)[][];
  const zs = doc.z as (number | null)[][];
  const pts: ([number, number] | null)[][] = xs.map((row, i) =>
    row.map((x, j) => {
      const y = ys[i][j];
      const z = zs[i][j];
      if (x === null || y === null || z === null) return null;
      return [x + 0.4 * y, z + 0.25 * y];
    }));
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const row of pts) {
    for (const p of row) {
      if (!p) continue;
      x0 = Math.min(x0, p[0]); x1 = Math.max(x1, p[0]);
      y0 = Math.min(y0, p[1]); y1 = Math.max(y1, p[1]);
    }
  }
  if (!isFinite(x0)) return "";
  const proj = project({ x0, x1, y0, y1 });
  const lines: string[] = [];
  const step = 4;
  for (let i = 0; i < pts.length; i += step) {
    const d: string[] = [];
    for (const p of pts[i]) {
      if (!p) { d.length && lines.push(path(d)); d.length = 0; continue; }
      const [px, py] = proj(p[0], p[1]);
      d.push(`${d.length === 0 ? "M" : "L"}${px.toFixed(1)},${py.toFixed(1)}`);
    }
    if (d.length > 1) lines.push(path(d));
  }
  for (let j = 0; j < (pts[0]?.length ?? 0); j += step) {
    const d: string[] = [];
    for (const row of pts) {
      const p = row[j];
      if (!p) { d.length && lines.push(path(d)); d.length = 0; continue; }
      const [px, py] = proj(p[0], p[1]);
      d.push(`${d.length === 0 ? "M" : "L"}${px.toFixed(1)},${py.toFixed(1)}`);
    }
    if (d.length > 1) lines.push(path(d));
  }
  return lines.join("\n");

  function path(d: string[]): string {
    return `<path fill="none" stroke="#1668b4" stroke-width="0.7" d="${d.join(" ")}"/>`;
  }
}

/** Scalar fields render as three axis-aligned mid-plane slice heatmaps. */
function renderField(doc: Record<string, unknown>): string {
  const field = doc.field as (number | null)[][][];
  const n = field.length;
  const mid = Math.floor(n / 2);
  const sliceW = (WIDTH - 4 * PAD) / 3;
  const sliceH = HEIGHT - 2 * PAD;
  const xSlice = field[mid];
  const ySlice = field.map((plane) => plane[mid]);
  const zSlice = field.map((plane) => plane.map((line) => line[mid]));
  const parts: string[] = [];
  [xSlice, ySlice, zSlice].forEach((slice, idx) => {
    const x = PAD + idx * (sliceW + PAD);
    parts.push(...heatmapCells(slice, x, PAD, sliceW, sliceH));
    parts.push(`<text x="${x}" y="${PAD - 6}" font-size="12">` +
      `${["x", "y", "z"][idx]} slice</text>`);
  });
  return parts.join("\n");
}

function renderText(doc: Record<string, unknown>): string {
  const at = doc.at as [number, number];
  return `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" font-size="${doc.size ?? 14}">` +
    `${esc(String(doc.text))}<!--at ${at[0]},${at[1]}--></text>`;
}

function renderBody(doc: Record<string, unknown>): string {
  switch (doc.kind) {
    case "plot2d":
    case "param2d":
    case "table2d":
    case "points2d":
      return render2dSeries(doc.series as Series[]);
    case "composite2d": {
      const parts = doc.parts as Record<string, unknown>[];
      const all: Series[] = [];
      const texts: string[] = [];
      for (const part of parts) {
        if (part.series) all.push(...(part.series as Series[]));
        else if (part.kind === "text2d") texts.push(renderText(part));
      }
      return render2dSeries(all) + texts.join("\n");
    }
    case "text2d":
      return renderText(doc);
    case "surface3d":
      return renderSurface(doc);
    case "paramSurface3d":
      return renderParamSurface(doc);
    case "scalarField3d":
      return renderField(doc);
    default:
      return `<text x="10" y="20">unknown plot kind ${esc(String(doc.kind))}</text>`;
  }
}

export function renderPlotDocument(doc: Record<string, unknown>): string {
  if (doc.version !== SUPPORTED_VERSION) {
    throw new UnsupportedPlotVersion(doc.version);
  }
  return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#fdfdfd"/>\n` +
    renderBody(doc) + "\n</svg>";
}
