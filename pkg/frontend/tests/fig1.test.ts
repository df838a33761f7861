import path from "path";
import { describe, expect, it } from "vitest";

import { renderFig1 } from "../src/fig1.js";
import { SchemaError, loadFig1 } from "../src/schema.js";

const FIXTURES = path.join(__dirname, "fixtures");

describe("density-sweep rendering", () => {
  const rows = loadFig1(path.join(FIXTURES, "fig1.csv"));

  it("draws one labeled series per duty-cycle value", () => {
    const svg = renderFig1(rows);
    expect(svg.startsWith("<svg")).toBe(true);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3);
    for (const q of [0.2, 0.5, 0.8]) {
      expect(svg).toContain(`data-q="${q}"`);
      expect(svg).toContain(`q = ${q}`);
    }
    expect(svg).toContain("log scale");
  });

  it("renders a decreasing tail at high density", () => {
    // the upper half of every series decreases; the polyline y-pixel
    // coordinates must increase correspondingly (SVG y grows downward)
    const svg = renderFig1(rows);
    const line = svg.split("\n").find((l) => l.includes('data-q="0.2"'))!;
    const pts = [...line.matchAll(/([-\d.]+),([-\d.]+)/g)].map((m) => Number(m[2]));
    const tail = pts.slice(Math.floor(pts.length / 2));
    for (let i = 1; i < tail.length; i++) {
      expect(tail[i]).toBeGreaterThan(tail[i - 1]);
    }
  });

  it("rejects series with fewer than two points", () => {
    expect(() => renderFig1(rows.slice(0, 1))).toThrow(SchemaError);
  });

  it("rejects non-positive densities on the log axis", () => {
    const bad = rows.slice(0, 3).map((r) => ({ ...r }));
    bad[1].sc_density = 0;
    expect(() => renderFig1(bad)).toThrow(/log axis/);
  });
});
