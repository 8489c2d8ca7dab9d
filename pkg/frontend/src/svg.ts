/** Deterministic SVG assembly: fixed float formatting, no timestamps. */

export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`cannot place non-finite value ${v}`);
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function attrs(a: Record<string, string | number>): string {
  return Object.entries(a)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
}

export interface Scale {
  map(v: number): number;
  domain: [number, number];
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): Scale {
  const span = d1 - d0 || 1;
  return {
    domain: [d0, d1],
    map: (v: number) => r0 + ((v - d0) / span) * (r1 - r0),
  };
}

/** Round tick positions covering the domain, about `count` of them. */
export function ticks(d0: number, d1: number, count = 6): number[] {
  const span = d1 - d0 || 1;
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const out: number[] = [];
  for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-12; t += step) {
    out.push(Math.abs(t) < 1e-12 ? 0 : t);
  }
  return out;
}

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = { left: 62, right: 16, top: 34, bottom: 46 };

export function frame(
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string,
  title?: string,
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<rect ${attrs({ x: x0, y: y1, width: x1 - x0, height: y0 - y1, fill: "white", stroke: "black", "stroke-width": 1 })}/>`,
  );
  for (const t of ticks(x.domain[0], x.domain[1])) {
    const px = x.map(t);
    parts.push(
      `<line ${attrs({ x1: px, y1: y0, x2: px, y2: y0 + 5, stroke: "black" })}/>`,
      `<text ${attrs({ x: px, y: y0 + 18, "text-anchor": "middle", "font-size": 11 })}>${+t.toPrecision(6)}</text>`,
    );
  }
  for (const t of ticks(y.domain[0], y.domain[1])) {
    const py = y.map(t);
    parts.push(
      `<line ${attrs({ x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "black" })}/>`,
      `<text ${attrs({ x: x0 - 8, y: py + 4, "text-anchor": "end", "font-size": 11 })}>${+t.toPrecision(6)}</text>`,
    );
  }
  parts.push(
    `<text ${attrs({ x: (x0 + x1) / 2, y: HEIGHT - 10, "text-anchor": "middle", "font-size": 13 })}>${xLabel}</text>`,
    `<text ${attrs({ x: 16, y: (y0 + y1) / 2, "text-anchor": "middle", "font-size": 13, transform: `rotate(-90 16 ${fmt((y0 + y1) / 2)})` })}>${yLabel}</text>`,
  );
  if (title) {
    parts.push(
      `<text ${attrs({ x: (x0 + x1) / 2, y: 20, "text-anchor": "middle", "font-size": 14 })}>${title}</text>`,
    );
  }
  return parts.join("\n");
}

export function openCircle(
  px: number,
  py: number,
  data: Record<string, string | number>,
): string {
  return `<circle ${attrs({ cx: px, cy: py, r: 6, fill: "none", stroke: "crimson", "stroke-width": 1.6, class: "marker-degenerate", ...data })}/>`;
}

export function cross(
  px: number,
  py: number,
  data: Record<string, string | number>,
): string {
  const d = 5;
  return (
    `<g ${attrs({ class: "marker-nondegenerate", stroke: "teal", "stroke-width": 1.6, ...data })}>` +
    `<line ${attrs({ x1: px - d, y1: py - d, x2: px + d, y2: py + d })}/>` +
    `<line ${attrs({ x1: px - d, y1: py + d, x2: px + d, y2: py - d })}/>` +
    `</g>`
  );
}

export function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">\n${body}\n</svg>\n`
  );
}
