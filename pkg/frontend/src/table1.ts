import { Table1Row } from "./schema.js";

const HIGHLIGHT_DEV = 0.01; // bold deviations below 1%
const SC_FLAG_DEV = 0.05; // mark small-cell deviations above 5%

function pct(x: number): string {
  return `${(x * 100).toFixed(2)}%`;
}

function sig(x: number, digits = 4): string {
  return Number(x.toPrecision(digits)).toString();
}

export function renderTable1(rows: Table1Row[]): string {
  const lines: string[] = [];
  lines.push("# Macro vs. small-cell ASE comparison");
  lines.push("");
  lines.push(
    "| (K, N, beta) | macro ASE | published macro | macro dev | SC ASE | published SC | SC dev |"
  );
  lines.push("| --- | ---: | ---: | ---: | ---: | ---: | ---: |");
  let flagged = 0;
  for (const r of rows) {
    const macroDev = Math.abs(r.rel_dev) < HIGHLIGHT_DEV ? `**${pct(r.rel_dev)}**` : pct(r.rel_dev);
    const scDev = (r.sc_ase - r.paper_sc_ase) / r.paper_sc_ase;
    let scCell = pct(scDev);
    if (Math.abs(scDev) > SC_FLAG_DEV) {
      scCell += " (!)";
      flagged += 1;
    }
    lines.push(
      `| (${r.k}, ${r.n}, ${r.beta}) | ${sig(r.macro_ase)} | ${sig(r.paper_macro_ase)} | ` +
        `${macroDev} | ${r.sc_ase.toExponential(3)} | ${r.paper_sc_ase.toExponential(3)} | ${scCell} |`
    );
  }
  lines.push("");
  lines.push(`Bold deviation: within ${pct(HIGHLIGHT_DEV)} of the published value.`);
  if (flagged > 0) {
    lines.push(
      `(!) ${flagged} small-cell entr${flagged === 1 ? "y" : "ies"} deviate beyond ` +
        `${pct(SC_FLAG_DEV)}; the published small-cell column is not reproducible in ` +
        "absolute terms (see the calibration report emitted next to the CSV)."
    );
  }
  lines.push("");
  return lines.join("\n");
}
