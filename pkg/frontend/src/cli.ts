import fs from "fs";
import { renderFig1 } from "./fig1.js";
import { renderTable1 } from "./table1.js";
import { SchemaError, loadFig1, loadTable1 } from "./schema.js";

function usage(): never {
  console.error("usage: render --input data.csv --output out.(svg|md) --kind fig1|table1");
  process.exit(2);
}

function parseArgs(argv: string[]): { input: string; output: string; kind: string } {
  const out: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!val || !["--input", "--output", "--kind"].includes(key)) usage();
    out[key.slice(2)] = val;
  }
  if (!out.input || !out.output || !out.kind) usage();
  if (out.kind !== "fig1" && out.kind !== "table1") usage();
  return out as { input: string; output: string; kind: string };
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  try {
    const rendered =
      args.kind === "fig1"
        ? renderFig1(loadFig1(args.input))
        : renderTable1(loadTable1(args.input));
    fs.writeFileSync(args.output, rendered);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`render: schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
