import { describe, expect, it } from "vitest";
import {
  renderPlotDocument,
  Series,
  UnsupportedPlotVersion,
} from "../src/plot.js";

function sampled(f: (x: number) => number | null, count = 512,
                 a = -1, b = 1): Series {
  const points: [number, number | null][] = [];
  const holes: boolean[] = [];
  for (let i = 0; i < count; i++) {
    const x = a + ((b - a) * i) / (count - 1);
    const y = f(x);
    points.push([x, y]);
    holes.push(y === null);
  }
  return { points, holes, label: "f", connected: true };
}

function doc(series: Series[], kind = "plot2d"): Record<string, unknown> {
  return { version: 1, kind, ranges: [-1, 1], labels: {}, series };
}

function vertexCount(path: string): number {
  return (path.match(/[ML]/g) ?? []).length;
}

describe("renderPlotDocument", () => {
  it("draws a 512-sample function as one polyline with 512 vertices", () => {
    const svg = renderPlotDocument(doc([sampled((x) => x * x)]));
    const paths = svg.match(/<path[^>]*d="([^"]*)"/g)!;
    expect(paths).toHaveLength(1);
    expect(vertexCount(paths[0])).toBe(512);
    expect(svg).toContain("<svg");
  });

  it("breaks the polyline at hole flags so no segment spans the gap", () => {
    const series = sampled((x) => (Math.abs(x) < 0.1 ? null : 1 / x));
    const svg = renderPlotDocument(doc([series]));
    const paths = [...svg.matchAll(/<path[^>]*d="([^"]*)"/g)].map((m) => m[1]);
    expect(paths).toHaveLength(2);
    const total = paths.reduce((n, p) => n + vertexCount(p), 0);
    const drawn = series.holes.filter((h) => !h).length;
    expect(total).toBe(drawn);
    // each gap starts a fresh moveto, so every path has exactly one M
    for (const p of paths) {
      expect(p.match(/M/g)).toHaveLength(1);
    }
  });

  it("renders point clouds as circles, not lines", () => {
    const series = sampled((x) => x, 20);
    series.connected = false;
    const svg = renderPlotDocument(doc([series], "points2d"));
    expect(svg).not.toContain("<path");
    expect((svg.match(/<circle/g) ?? [])).toHaveLength(20);
  });

  it("overlays every series of a composite document", () => {
    const part = (f: (x: number) => number) =>
      ({ version: 1, kind: "plot2d", ranges: [-1, 1], labels: {},
         series: [sampled(f, 64)] });
    const svg = renderPlotDocument({
      version: 1, kind: "composite2d", ranges: [-1, 1], labels: {},
      parts: [part((x) => x), part((x) => -x),
              { version: 1, kind: "text2d", ranges: [0, 0], labels: {},
                text: "crossing", at: [0, 0] }],
    });
    const paths = svg.match(/<path/g)!;
    expect(paths).toHaveLength(2);
    expect(svg).toContain("crossing");
  });

  it("renders an explicit surface as a heatmap over the grid", () => {
    const n = 16;
    const z = Array.from({ length: n }, (_, i) =>
      Array.from({ length: n }, (_, j) => i + j));
    const svg = renderPlotDocument({
      version: 1, kind: "surface3d", ranges: [-1, 1, -1, 1], labels: {},
      z, size: [n, n],
    });
    expect((svg.match(/<rect/g) ?? []).length).toBe(n * n + 1); // cells + background
  });

  it("renders a scalar field as three axis-aligned slices", () => {
    const n = 8;
    const field = Array.from({ length: n }, (_, i) =>
      Array.from({ length: n }, (_, j) =>
        Array.from({ length: n }, (_, k) => i * j - k)));
    const svg = renderPlotDocument({
      version: 1, kind: "scalarField3d", ranges: [0, 1, 0, 1, 0, 1], labels: {},
      field, size: [n, n, n],
    });
    expect(svg).toContain("x slice");
    expect(svg).toContain("y slice");
    expect(svg).toContain("z slice");
    expect((svg.match(/<rect/g) ?? []).length).toBe(3 * n * n + 1);
  });

  it("escapes labels so markup in expressions stays inert", () => {
    const series = sampled((x) => x, 4);
    series.label = "x < 1 & y";
    const svg = renderPlotDocument(doc([series]));
    expect(svg).toContain("x &lt; 1 &amp; y");
    expect(svg).not.toContain("x < 1 &");
  });

  it("refuses documents from a newer schema with an upgrade notice", () => {
    expect(() => renderPlotDocument({ version: 2, kind: "plot2d", series: [] }))
      .toThrowError(UnsupportedPlotVersion);
    expect(() => renderPlotDocument({ version: 2, kind: "plot2d", series: [] }))
      .toThrowError(/upgrade required/);
  });
});
