import { Fig1Row, SchemaError } from "./schema.js";

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { left: 80, right: 170, top: 40, bottom: 60 };
const COLORS = ["#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910"];

interface Series {
  q: number;
  points: { x: number; y: number }[];
}

function groupByQ(rows: Fig1Row[]): Series[] {
  const groups = new Map<number, { x: number; y: number }[]>();
  for (const row of rows) {
    if (!groups.has(row.dl_fraction)) groups.set(row.dl_fraction, []);
    groups.get(row.dl_fraction)!.push({ x: row.sc_density, y: row.sc_ase });
  }
  const series = [...groups.entries()]
    .map(([q, points]) => ({ q, points: points.sort((a, b) => a.x - b.x) }))
    .sort((a, b) => a.q - b.q);
  for (const s of series) {
    if (s.points.length < 2) {
      throw new SchemaError(`series q=${s.q} has fewer than 2 points`);
    }
    if (s.points.some((p) => p.x <= 0)) {
      throw new SchemaError(`series q=${s.q} has a non-positive density (log axis)`);
    }
  }
  return series;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

export function renderFig1(rows: Fig1Row[]): string {
  const series = groupByQ(rows);
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => p.y));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yHi = Math.max(...ys) * 1.05;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xPix = (x: number) =>
    MARGIN.left + ((Math.log10(x) - Math.log10(xLo)) / (Math.log10(xHi) - Math.log10(xLo))) * plotW;
  const yPix = (y: number) => MARGIN.top + plotH - (y / yHi) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="13">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16">` +
      `Aggregate small-cell ASE vs. density</text>`
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`);

  for (const t of decadeTicks(xLo, xHi)) {
    const px = xPix(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 6}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 22}" text-anchor="middle">1e${Math.round(Math.log10(t))}</text>`
    );
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top}" x2="${px}" y2="${y0}" stroke="#dddddd" stroke-dasharray="3,4"/>`
    );
  }
  const yTicks = 5;
  for (let i = 0; i <= yTicks; i++) {
    const v = (yHi * i) / yTicks;
    const py = yPix(v);
    parts.push(`<line x1="${x0 - 6}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 10}" y="${py + 4}" text-anchor="end">${v.toExponential(1)}</text>`
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle">` +
      `small-cell density (per m^2, log scale)</text>`
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">small-cell ASE (bit/s/Hz per m^2)</text>`
  );

  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const pts = s.points.map((p) => `${xPix(p.x).toFixed(2)},${yPix(p.y).toFixed(2)}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="2" data-q="${s.q}"/>`
    );
    const ly = MARGIN.top + 16 + i * 22;
    const lx = MARGIN.left + plotW + 16;
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${lx + 32}" y="${ly}">q = ${s.q}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
