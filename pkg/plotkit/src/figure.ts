/**
 * Figure assembly for the three plot kinds.
 *
 * Styling follows the source conventions: disentangled series are dashed,
 * entangled series solid, and Monte Carlo series are drawn as markers with
 * one-standard-error bars instead of a connected line. Optional horizontal
 * guides mark the closed-form anchor values 1/16, 1/8, 3/16 and 1/4.
 */

import { writeFileSync } from "node:fs";

import { CsvSchemaError, CurveData, parseCurveCsv } from "./csv.js";
import { encodePng } from "./png.js";
import { Color, Raster } from "./raster.js";

export type FigureKind = "gisin" | "zeilinger" | "kim";

export interface FigureInput {
  path: string;
  label?: string;
}

export interface FigureSpec {
  kind: FigureKind;
  inputs: FigureInput[];
  output: string;
  guides?: boolean;
}

export interface RenderInfo {
  seriesCount: number;
  xExtent: [number, number];
  yExtent: [number, number];
  width: number;
  height: number;
  bytesWritten: number;
}

const MAX_SERIES = 4;
const PALETTE: Color[] = [
  [31, 78, 156],
  [192, 58, 43],
  [46, 125, 50],
  [123, 31, 162],
];
const BLACK: Color = [0, 0, 0];
const GREY: Color = [150, 150, 150];

const WIDTH = 800;
const HEIGHT = 500;
const MARGIN = { left: 80, right: 30, top: 30, bottom: 60 };

const GUIDE_LEVELS: Array<[number, string]> = [
  [1 / 16, "1/16"],
  [1 / 8, "1/8"],
  [3 / 16, "3/16"],
  [1 / 4, "1/4"],
];

const X_AXIS_LABEL: Record<FigureKind, string> = {
  gisin: "ANALYZER PHASE BETA (DEG)",
  kim: "ANALYZER ANGLE PHI (DEG)",
  zeilinger: "CELL (ALICE:BOB)",
};

function loadSeries(spec: FigureSpec): CurveData[] {
  if (spec.inputs.length === 0) {
    throw new CsvSchemaError("at least one input CSV is required");
  }
  if (spec.inputs.length > MAX_SERIES) {
    throw new CsvSchemaError(
      `${spec.kind} figures accept at most ${MAX_SERIES} series, got ${spec.inputs.length}`
    );
  }
  const series = spec.inputs.map((input) => parseCurveCsv(input.path, input.label));
  for (const curve of series) {
    const command = curve.meta["command"];
    if (command !== undefined && command !== spec.kind) {
      throw new CsvSchemaError(
        `${curve.path}: holds "${command}" data, expected "${spec.kind}"`
      );
    }
  }
  return series;
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const rawStep = span / count;
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((m) => m * magnitude).find((s) => s >= rawStep) ?? rawStep;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9; v += step) {
    ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return ticks;
}

function formatTick(value: number): string {
  const text = value.toFixed(3);
  return text.replace(/\.?0+$/, "") || "0";
}

export function render(spec: FigureSpec): RenderInfo {
  const series = loadSeries(spec);

  let xMin = Infinity;
  let xMax = -Infinity;
  let yMax = -Infinity;
  for (const curve of series) {
    for (const p of curve.points) {
      xMin = Math.min(xMin, p.x);
      xMax = Math.max(xMax, p.x);
      yMax = Math.max(yMax, p.y + (p.stderr ?? 0));
    }
  }
  if (spec.kind === "zeilinger") {
    xMin -= 0.5;
    xMax += 0.5;
  }
  if (xMax <= xMin) xMax = xMin + 1;
  // Expectation values top out at the entangled 1/4; keep that visible.
  const yTop = Math.max(0.26, yMax * 1.08);
  const yBottom = 0.0;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const toX = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const toY = (y: number) => MARGIN.top + (1 - (y - yBottom) / (yTop - yBottom)) * plotH;

  const canvas = new Raster(WIDTH, HEIGHT);

  // Frame
  canvas.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, BLACK);
  canvas.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);

  // Ticks
  const xTicks =
    spec.kind === "zeilinger"
      ? series[0].points.map((p) => p.x)
      : niceTicks(xMin, xMax, 6);
  for (const tick of xTicks) {
    const px = toX(tick);
    canvas.line(px, MARGIN.top + plotH, px, MARGIN.top + plotH + 5, BLACK);
    const label = formatTick(tick);
    canvas.text(px - Raster.textWidth(label) / 2, MARGIN.top + plotH + 10, label, BLACK);
  }
  for (const tick of niceTicks(yBottom, yTop, 5)) {
    const py = toY(tick);
    canvas.line(MARGIN.left - 5, py, MARGIN.left, py, BLACK);
    const label = formatTick(tick);
    canvas.text(MARGIN.left - 10 - Raster.textWidth(label), py - 3, label, BLACK);
  }

  // Axis labels
  const xLabel = X_AXIS_LABEL[spec.kind];
  canvas.text(
    MARGIN.left + plotW / 2 - Raster.textWidth(xLabel) / 2,
    HEIGHT - 20,
    xLabel,
    BLACK
  );
  canvas.text(8, MARGIN.top - 12, "EXPECTATION", BLACK);

  // Optional anchor guides
  if (spec.guides) {
    for (const [level, name] of GUIDE_LEVELS) {
      if (level > yTop) continue;
      const py = toY(level);
      canvas.line(MARGIN.left, py, MARGIN.left + plotW, py, GREY, [2, 4]);
      canvas.text(MARGIN.left + plotW + 4, py - 3, name, GREY);
    }
  }

  // Series
  series.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length];
    const monteCarlo = curve.meta["engine"] === "montecarlo";
    const dashed = curve.meta["model"] === "disentangled";
    if (monteCarlo || spec.kind === "zeilinger") {
      for (const p of curve.points) {
        const px = toX(p.x);
        canvas.marker(px, toY(p.y), color);
        if (p.stderr !== null && p.stderr > 0) {
          canvas.errorBar(px, toY(p.y - p.stderr), toY(p.y + p.stderr), color);
        }
      }
    } else {
      for (let i = 1; i < curve.points.length; i++) {
        canvas.line(
          toX(curve.points[i - 1].x),
          toY(curve.points[i - 1].y),
          toX(curve.points[i].x),
          toY(curve.points[i].y),
          color,
          dashed ? [6, 5] : undefined
        );
      }
    }
    // Legend entry
    const ly = MARGIN.top + 8 + index * 14;
    const lx = MARGIN.left + plotW - 150;
    if (monteCarlo) {
      canvas.marker(lx + 10, ly + 3, color);
    } else {
      canvas.line(lx, ly + 3, lx + 20, ly + 3, color, dashed ? [6, 5] : undefined, 1);
    }
    canvas.text(lx + 26, ly, curve.label.toUpperCase().slice(0, 18), color);
  });

  const png = encodePng(WIDTH, HEIGHT, canvas.pixels);
  writeFileSync(spec.output, png);
  return {
    seriesCount: series.length,
    xExtent: [xMin, xMax],
    yExtent: [yBottom, yTop],
    width: WIDTH,
    height: HEIGHT,
    bytesWritten: png.length,
  };
}
