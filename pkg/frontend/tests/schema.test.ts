import fs from "fs";
import os from "os";
import path from "path";
import { describe, expect, it } from "vitest";

import { SchemaError, loadFig1, loadTable1 } from "../src/schema.js";

const FIXTURES = path.join(__dirname, "fixtures");

function tmpCsv(content: string): string {
  const p = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "plots-")), "data.csv");
  fs.writeFileSync(p, content);
  return p;
}

describe("fig1 schema", () => {
  it("loads the generated sweep", () => {
    const rows = loadFig1(path.join(FIXTURES, "fig1.csv"));
    expect(rows.length).toBe(75);
    expect(new Set(rows.map((r) => r.dl_fraction))).toEqual(new Set([0.2, 0.5, 0.8]));
    for (const r of rows) {
      expect(r.sc_density).toBeGreaterThan(0);
      expect(r.sc_ase).toBeGreaterThanOrEqual(0);
    }
  });

  it("rejects missing columns", () => {
    const p = tmpCsv("sc_density,dl_fraction\n1e-4,0.2\n");
    expect(() => loadFig1(p)).toThrow(SchemaError);
    expect(() => loadFig1(p)).toThrow(/missing columns/);
  });

  it("rejects an empty file", () => {
    const p = tmpCsv("sc_density,dl_fraction,sue_coverage,sbs_coverage,sc_ase\n");
    expect(() => loadFig1(p)).toThrow(/no data rows/);
  });

  it("rejects non-numeric cells", () => {
    const p = tmpCsv(
      "sc_density,dl_fraction,sue_coverage,sbs_coverage,sc_ase\n1e-4,0.2,x,0.8,1e-4\n"
    );
    expect(() => loadFig1(p)).toThrow(/not a number/);
  });
});

describe("table1 schema", () => {
  it("loads the generated table", () => {
    const rows = loadTable1(path.join(FIXTURES, "table1.csv"));
    expect(rows.length).toBe(9);
    expect(rows[0].k).toBe(10);
    expect(rows[0].n).toBe(100);
  });

  it("rejects a fig1 file", () => {
    expect(() => loadTable1(path.join(FIXTURES, "fig1.csv"))).toThrow(/missing columns/);
  });
});
