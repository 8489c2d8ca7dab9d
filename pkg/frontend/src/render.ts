import { writeFileSync } from "fs";

import { num, readTable, requireColumns, Table } from "./csv.js";
import { FigureSpec } from "./figures.js";
import {
  attrs,
  cross,
  document,
  fmt,
  frame,
  HEIGHT,
  linearScale,
  MARGIN,
  openCircle,
  Scale,
  WIDTH,
} from "./svg.js";

const PARITY_COLOR: Record<string, string> = {
  "+1": "royalblue",
  "-1": "firebrick",
  undefined: "dimgray",
};

function domain(
  values: number[],
  lo?: number,
  hi?: number,
  pad = 0.04,
): [number, number] {
  let d0 = lo ?? (values.length ? Math.min(...values) : 0);
  let d1 = hi ?? (values.length ? Math.max(...values) : 1);
  if (d0 === d1) {
    d0 -= 0.5;
    d1 += 0.5;
  }
  const span = d1 - d0;
  return [lo ?? d0 - pad * span, hi ?? d1 + pad * span];
}

function scales(
  xs: number[],
  ys: number[],
  spec: FigureSpec,
): { x: Scale; y: Scale } {
  const [x0, x1] = domain(xs, spec.axes?.xMin, spec.axes?.xMax);
  const [y0, y1] = domain(ys, spec.axes?.yMin, spec.axes?.yMax);
  return {
    x: linearScale(x0, x1, MARGIN.left, WIDTH - MARGIN.right),
    y: linearScale(y0, y1, HEIGHT - MARGIN.bottom, MARGIN.top),
  };
}

function levelCurves(table: Table, x: Scale, y: Scale, yCol: string): string {
  const parts: string[] = [];
  const byLevel = new Map<string, { g: number; e: number; parity: string }[]>();
  for (const row of table.rows) {
    const entry = { g: num(row, "g"), e: num(row, yCol), parity: row.parity };
    const list = byLevel.get(row.level) ?? [];
    list.push(entry);
    byLevel.set(row.level, list);
  }
  for (const [level, pts] of [...byLevel.entries()].sort()) {
    pts.sort((a, b) => a.g - b.g);
    const path = pts
      .map((q) => `${fmt(x.map(q.g))},${fmt(y.map(q.e))}`)
      .join(" ");
    parts.push(
      `<polyline ${attrs({ points: path, fill: "none", stroke: "silver", "stroke-width": 1, class: `level-${level}` })}/>`,
    );
    for (const q of pts) {
      parts.push(
        `<circle ${attrs({
          cx: x.map(q.g),
          cy: y.map(q.e),
          r: 1.7,
          fill: PARITY_COLOR[q.parity] ?? "dimgray",
        })}/>`,
      );
    }
  }
  return parts.join("\n");
}

function markerLayer(
  markers: Table,
  x: Scale,
  y: Scale,
  yOf: (row: Record<string, string>) => number,
): string {
  const parts: string[] = [];
  for (const row of markers.rows) {
    const g = num(row, "g");
    const data = {
      "data-g": row.g,
      "data-energy": row.energy ?? "",
      "data-n": row.n ?? "",
      "data-kind": row.kind,
    };
    if (row.kind === "degenerate") {
      parts.push(openCircle(x.map(g), y.map(yOf(row)), data));
    } else {
      parts.push(cross(x.map(g), y.map(yOf(row)), data));
    }
  }
  return parts.join("\n");
}

function renderSpectrum(spec: FigureSpec, shifted: boolean): string {
  const table = readTable(spec.inputs[0]);
  const yCol = shifted ? "energy_plus_lambda" : "energy";
  requireColumns(table, ["g", yCol, "parity", "level"], spec.inputs[0]);
  const markers = spec.inputs[1] ? readTable(spec.inputs[1]) : null;
  if (markers) {
    requireColumns(
      markers,
      ["g", "kind", shifted ? "n" : "energy"],
      spec.inputs[1],
    );
  }
  const xs = table.rows.map((row) => num(row, "g"));
  const ys = table.rows.map((row) => num(row, yCol));
  if (markers) {
    xs.push(...markers.rows.map((row) => num(row, "g")));
    ys.push(
      ...markers.rows.map((row) => num(row, shifted ? "n" : "energy")),
    );
  }
  const { x, y } = scales(xs, ys, spec);
  const parts = [
    frame(x, y, "g", shifted ? "E + lambda_+" : "E", spec.title),
  ];
  if (shifted) {
    // horizontal pole lines at integer values inside the window
    for (let n = Math.ceil(y.domain[0]); n <= Math.floor(y.domain[1]); n++) {
      if (n < 0) continue;
      parts.push(
        `<line ${attrs({ x1: MARGIN.left, y1: y.map(n), x2: WIDTH - MARGIN.right, y2: y.map(n), stroke: "indianred", "stroke-dasharray": "6 4", "stroke-width": 0.8, class: "pole-line" })}/>`,
      );
    }
  }
  parts.push(levelCurves(table, x, y, yCol));
  if (markers) {
    parts.push(
      markerLayer(markers, x, y, (row) => num(row, shifted ? "n" : "energy")),
    );
  }
  return document(parts.join("\n"));
}

function renderFZeros(spec: FigureSpec): string {
  const table = readTable(spec.inputs[0]);
  requireColumns(table, ["n", "g", "kind", "is_gs_crossing"], spec.inputs[0]);
  const xs = table.rows.map((row) => num(row, "g"));
  const ys = table.rows.map((row) => num(row, "n"));
  const { x, y } = scales(xs.length ? xs : [0, 1], [-0.5, ...ys, Math.max(0, ...ys) + 0.5], spec);
  const parts = [frame(x, y, "g", "pole line n", spec.title)];
  for (let n = Math.max(0, Math.ceil(y.domain[0])); n <= Math.floor(y.domain[1]); n++) {
    parts.push(
      `<line ${attrs({ x1: MARGIN.left, y1: y.map(n), x2: WIDTH - MARGIN.right, y2: y.map(n), stroke: "gainsboro", "stroke-width": 0.8 })}/>`,
    );
  }
  for (const row of table.rows) {
    const px = x.map(num(row, "g"));
    const py = y.map(num(row, "n"));
    const data = {
      "data-g": row.g,
      "data-n": row.n,
      "data-kind": row.kind,
      "data-gs": row.is_gs_crossing,
    };
    parts.push(
      row.kind === "degenerate" ? openCircle(px, py, data) : cross(px, py, data),
    );
    if (row.is_gs_crossing === "true") {
      parts.push(
        `<circle ${attrs({ cx: px, cy: py, r: 9, fill: "none", stroke: "crimson", "stroke-width": 0.8, "stroke-dasharray": "2 2", class: "gs-crossing" })}/>`,
      );
    }
  }
  return document(parts.join("\n"));
}

function renderPhase(spec: FigureSpec): string {
  const table = readTable(spec.inputs[0]);
  requireColumns(
    table,
    ["r", "n", "g_c", "gs_parity_below", "gs_parity_above", "status"],
    spec.inputs[0],
  );
  const xs = table.rows.map((row) => num(row, "r"));
  const ys = table.rows.map((row) => num(row, "g_c"));
  const { x, y } = scales(xs, [0, ...ys], spec);
  const parts = [frame(x, y, "r", "g", spec.title)];
  // isotropy line r = 1 separates the two crossing families
  if (x.domain[0] < 1 && x.domain[1] > 1) {
    parts.push(
      `<line ${attrs({ x1: x.map(1), y1: MARGIN.top, x2: x.map(1), y2: HEIGHT - MARGIN.bottom, stroke: "dimgray", "stroke-dasharray": "5 4", class: "isotropy-line" })}/>`,
    );
  }
  const confirmed = table.rows.filter((row) => row.status === "ok");
  const byN = new Map<string, Record<string, string>[]>();
  for (const row of confirmed) {
    const list = byN.get(row.n) ?? [];
    list.push(row);
    byN.set(row.n, list);
  }
  for (const [n, rows] of [...byN.entries()].sort()) {
    for (const side of [(r: number) => r < 1, (r: number) => r > 1]) {
      const pts = rows
        .filter((row) => side(num(row, "r")))
        .sort((a, b) => num(a, "r") - num(b, "r"));
      if (pts.length > 1) {
        const path = pts
          .map((row) => `${fmt(x.map(num(row, "r")))},${fmt(y.map(num(row, "g_c")))}`)
          .join(" ");
        parts.push(
          `<polyline ${attrs({ points: path, fill: "none", stroke: "black", "stroke-width": 1.2, class: `boundary-${n}` })}/>`,
        );
      }
      for (const row of pts) {
        parts.push(
          `<circle ${attrs({ cx: x.map(num(row, "r")), cy: y.map(num(row, "g_c")), r: 2.5, fill: "black", "data-n": row.n, "data-r": row.r })}/>`,
        );
      }
    }
  }
  for (const row of table.rows.filter((q) => q.status !== "ok")) {
    parts.push(
      `<rect ${attrs({ x: x.map(num(row, "r")) - 3, y: y.map(num(row, "g_c")) - 3, width: 6, height: 6, fill: "none", stroke: "darkorange", class: "unconfirmed" })}/>`,
    );
  }
  // parity labels per anisotropy column, between consecutive boundaries
  const columns = new Map<string, Record<string, string>[]>();
  for (const row of confirmed) {
    const list = columns.get(row.r) ?? [];
    list.push(row);
    columns.set(row.r, list);
  }
  for (const [, rows] of [...columns.entries()].sort()) {
    rows.sort((a, b) => num(a, "g_c") - num(b, "g_c"));
    const r = num(rows[0], "r");
    const label = (gMid: number, text: string) =>
      `<text ${attrs({ x: x.map(r), y: y.map(gMid), "text-anchor": "middle", "font-size": 10, fill: "dimgray", class: "parity-label" })}>${text}</text>`;
    parts.push(label((y.domain[0] + num(rows[0], "g_c")) / 2, rows[0].gs_parity_below));
    for (let i = 0; i < rows.length; i++) {
      const top = i + 1 < rows.length ? num(rows[i + 1], "g_c") : y.domain[1];
      parts.push(label((num(rows[i], "g_c") + top) / 2, rows[i].gs_parity_above));
    }
  }
  return document(parts.join("\n"));
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "spectrum":
      return renderSpectrum(spec, false);
    case "shifted_spectrum":
      return renderSpectrum(spec, true);
    case "f_zeros":
      return renderFZeros(spec);
    case "phase":
      return renderPhase(spec);
  }
}

export function renderFigures(specs: FigureSpec[]): string[] {
  const written: string[] = [];
  for (const spec of specs) {
    const svg = renderFigure(spec);
    writeFileSync(spec.output, svg);
    written.push(spec.output);
  }
  return written;
}
