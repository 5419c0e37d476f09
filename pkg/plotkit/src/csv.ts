/**
 * Parser for the eprsim curve CSV schema:
 *
 *     # key=value          (metadata header, one pair per line)
 *     x,y,stderr           (column header)
 *     0.000000,0.0625,     (rows; stderr empty for analytic output)
 *
 * Anything else (counts tables, missing columns, non-numeric cells) is a
 * schema mismatch and raises CsvSchemaError.
 */

import { readFileSync } from "node:fs";

export class CsvSchemaError extends Error {}

export interface CurvePointData {
  x: number;
  y: number;
  stderr: number | null;
}

export interface CurveData {
  meta: Record<string, string>;
  points: CurvePointData[];
  path: string;
  label: string;
}

function parseNumber(cell: string, path: string, line: number): number {
  const value = Number(cell);
  if (cell.trim() === "" || !Number.isFinite(value)) {
    throw new CsvSchemaError(`${path}:${line}: expected a number, got ${JSON.stringify(cell)}`);
  }
  return value;
}

export function parseCurveCsv(path: string, label?: string): CurveData {
  const text = readFileSync(path, "utf-8");
  const meta: Record<string, string> = {};
  const points: CurvePointData[] = [];
  let sawHeader = false;

  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    if (line.trim() === "") continue;
    if (line.startsWith("# ")) {
      if (sawHeader) {
        throw new CsvSchemaError(`${path}:${i + 1}: metadata after the column header`);
      }
      const eq = line.indexOf("=");
      if (eq < 0) throw new CsvSchemaError(`${path}:${i + 1}: metadata line without '='`);
      meta[line.slice(2, eq).trim()] = line.slice(eq + 1).trim();
      continue;
    }
    if (!sawHeader) {
      if (line.trim() !== "x,y,stderr") {
        throw new CsvSchemaError(
          `${path}:${i + 1}: expected column header "x,y,stderr", got ${JSON.stringify(line)}`
        );
      }
      sawHeader = true;
      continue;
    }
    const cells = line.split(",");
    if (cells.length !== 3) {
      throw new CsvSchemaError(`${path}:${i + 1}: expected 3 columns, got ${cells.length}`);
    }
    points.push({
      x: parseNumber(cells[0], path, i + 1),
      y: parseNumber(cells[1], path, i + 1),
      stderr: cells[2].trim() === "" ? null : parseNumber(cells[2], path, i + 1),
    });
  }

  if (!sawHeader) throw new CsvSchemaError(`${path}: no "x,y,stderr" column header found`);
  if (points.length === 0) throw new CsvSchemaError(`${path}: no data rows`);
  for (let i = 1; i < points.length; i++) {
    if (points[i].x <= points[i - 1].x) {
      throw new CsvSchemaError(`${path}: x values must be strictly increasing`);
    }
  }

  const fallback = [meta["model"], meta["engine"]].filter(Boolean).join(" ") || path;
  return { meta, points, path, label: label ?? fallback };
}
