/**
 * Minimal SVG line-chart builder (no DOM, just strings).
 *
 * d3 supplies the scales and path generators; everything else is plain
 * element assembly so the output is a standalone .svg file.
 */

import { extent } from "d3-array";
import { scaleLinear, type ScaleLinear } from "d3-scale";
import { line } from "d3-shape";

export interface Point {
  x: number;
  y: number;
}

export interface ErrorBar {
  x: number;
  lo: number;
  hi: number;
}

export interface Series {
  label: string;
  points: Point[];
  color?: string;
  dash?: string;
  errors?: ErrorBar[];
}

export interface Guide {
  y: number;
  label: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  width?: number;
  height?: number;
  yDomain?: [number, number];
  guides?: Guide[];
  /** Rendered under the title in amber; used for data-quality warnings. */
  notes?: string[];
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

const MARGIN = { top: 40, right: 170, bottom: 46, left: 58 };

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e5 || a < 1e-3)) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

function el(
  name: string,
  attrs: Record<string, string | number>,
  body = "",
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(" ");
  return body === ""
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${body}</${name}>`;
}

function padDomain(lo: number, hi: number): [number, number] {
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - pad, hi + pad];
  }
  return [lo, hi];
}

function axes(
  x: ScaleLinear<number, number>,
  y: ScaleLinear<number, number>,
  spec: ChartSpec,
  w: number,
  h: number,
): string {
  const pieces: string[] = [];
  const [x0, x1] = x.range();
  const [y0, y1] = y.range();
  pieces.push(el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#333" }));
  pieces.push(el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#333" }));
  for (const t of x.ticks(6)) {
    const px = x(t);
    pieces.push(el("line", { x1: px, y1: y0, x2: px, y2: y0 + 5, stroke: "#333" }));
    pieces.push(el("line", {
      x1: px, y1: y0, x2: px, y2: y1, stroke: "#ddd", "stroke-width": 0.5,
    }));
    pieces.push(el("text", {
      x: px, y: y0 + 18, "text-anchor": "middle", "font-size": 11,
    }, esc(fmtTick(t))));
  }
  for (const t of y.ticks(6)) {
    const py = y(t);
    pieces.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "#333" }));
    pieces.push(el("line", {
      x1: x0, y1: py, x2: x1, y2: py, stroke: "#ddd", "stroke-width": 0.5,
    }));
    pieces.push(el("text", {
      x: x0 - 8, y: py + 4, "text-anchor": "end", "font-size": 11,
    }, esc(fmtTick(t))));
  }
  pieces.push(el("text", {
    x: (x0 + x1) / 2, y: h - 8, "text-anchor": "middle", "font-size": 12,
  }, esc(spec.xLabel)));
  pieces.push(el("text", {
    x: 14, y: (y0 + y1) / 2, "text-anchor": "middle", "font-size": 12,
    transform: `rotate(-90 14 ${(y0 + y1) / 2})`,
  }, esc(spec.yLabel)));
  return pieces.join("\n");
}

export function renderChart(spec: ChartSpec): string {
  const w = spec.width ?? 640;
  const h = spec.height ?? 420;
  const inner = { x0: MARGIN.left, x1: w - MARGIN.right, y0: h - MARGIN.bottom, y1: MARGIN.top };

  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = spec.series.flatMap((s) => [
    ...s.points.map((p) => p.y),
    ...(s.errors ?? []).flatMap((e) => [e.lo, e.hi]),
  ]);
  for (const g of spec.guides ?? []) ys.push(g.y);

  const body: string[] = [];
  body.push(el("rect", { x: 0, y: 0, width: w, height: h, fill: "white" }));
  body.push(el("text", {
    x: w / 2, y: 22, "text-anchor": "middle", "font-size": 14,
    "font-weight": "bold",
  }, esc(spec.title)));

  const notes = [...(spec.notes ?? [])];
  if (xs.length === 0) notes.push("no data");

  if (xs.length > 0) {
    const [xlo, xhi] = padDomain(...(extent(xs) as [number, number]));
    const x = scaleLinear().domain([xlo, xhi]).nice().range([inner.x0, inner.x1]);
    const [ylo, yhi] = spec.yDomain ??
      padDomain(...(extent(ys) as [number, number]));
    const y = scaleLinear().domain([ylo, yhi]).nice().range([inner.y0, inner.y1]);

    body.push(axes(x, y, spec, w, h));

    for (const g of spec.guides ?? []) {
      const py = y(g.y);
      body.push(el("line", {
        x1: inner.x0, y1: py, x2: inner.x1, y2: py,
        stroke: "#999", "stroke-dasharray": "6 3",
      }));
      body.push(el("text", {
        x: inner.x1 - 4, y: py - 4, "text-anchor": "end", "font-size": 10,
        fill: "#666",
      }, esc(g.label)));
    }

    const path = line<Point>().x((p) => x(p.x)).y((p) => y(p.y));
    spec.series.forEach((s, i) => {
      const color = s.color ?? PALETTE[i % PALETTE.length];
      const sorted = [...s.points].sort((a, b) => a.x - b.x);
      for (const e of s.errors ?? []) {
        body.push(el("line", {
          x1: x(e.x), y1: y(e.lo), x2: x(e.x), y2: y(e.hi),
          stroke: color, "stroke-width": 1,
        }));
      }
      if (sorted.length > 1) {
        body.push(el("path", {
          d: path(sorted) ?? "", fill: "none", stroke: color,
          "stroke-width": 1.8,
          ...(s.dash ? { "stroke-dasharray": s.dash } : {}),
        }));
      }
      for (const p of sorted) {
        body.push(el("circle", { cx: x(p.x), cy: y(p.y), r: 3, fill: color }));
      }
      // legend entry
      const ly = MARGIN.top + 16 * i;
      body.push(el("line", {
        x1: inner.x1 + 10, y1: ly, x2: inner.x1 + 30, y2: ly,
        stroke: color, "stroke-width": 2,
        ...(s.dash ? { "stroke-dasharray": s.dash } : {}),
      }));
      body.push(el("text", {
        x: inner.x1 + 34, y: ly + 4, "font-size": 11,
      }, esc(s.label)));
    });
  }

  notes.forEach((note, i) => {
    body.push(el("text", {
      x: w / 2, y: 36 + 13 * i, "text-anchor": "middle", "font-size": 11,
      fill: "#b8860b",
    }, esc(`warning: ${note}`)));
  });

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${w}" height="${h}" viewBox="0 0 ${w} ${h}" font-family="sans-serif">`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
