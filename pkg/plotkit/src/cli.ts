#!/usr/bin/env node
/**
 * plotkit <figure_kind> --in path[:label] [--in ...] --out image.png [--guides]
 *
 * Renders entangled-vs-disentangled coincidence figures from eprsim CSV
 * files. Exit codes: 0 success, 1 I/O failure, 2 usage or schema error.
 */

import { CsvSchemaError } from "./csv.js";
import { FigureInput, FigureKind, FigureSpec, render } from "./figure.js";

const KINDS: FigureKind[] = ["gisin", "zeilinger", "kim"];
const USAGE = "usage: plotkit <gisin|zeilinger|kim> --in path[:label] ... --out image.png [--guides]";

export function parseArgs(argv: string[]): FigureSpec {
  if (argv.length === 0) throw new UsageError(USAGE);
  const kind = argv[0] as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new UsageError(`unknown figure kind ${JSON.stringify(argv[0])}\n${USAGE}`);
  }
  const inputs: FigureInput[] = [];
  let output: string | undefined;
  let guides = false;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--in") {
      const value = argv[++i];
      if (value === undefined) throw new UsageError("--in needs a value");
      const colon = value.lastIndexOf(":");
      if (colon > 0 && !value.slice(colon + 1).includes("/")) {
        inputs.push({ path: value.slice(0, colon), label: value.slice(colon + 1) });
      } else {
        inputs.push({ path: value });
      }
    } else if (arg === "--out") {
      output = argv[++i];
      if (output === undefined) throw new UsageError("--out needs a value");
    } else if (arg === "--guides") {
      guides = true;
    } else {
      throw new UsageError(`unknown argument ${JSON.stringify(arg)}\n${USAGE}`);
    }
  }
  if (inputs.length === 0) throw new UsageError("at least one --in is required");
  if (!output) throw new UsageError("--out is required");
  return { kind, inputs, output, guides };
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const info = render(spec);
    process.stdout.write(
      `wrote ${spec.output} (${info.seriesCount} series, ${info.bytesWritten} bytes)\n`
    );
    return 0;
  } catch (error) {
    if (error instanceof UsageError || error instanceof CsvSchemaError) {
      process.stderr.write(`plotkit: ${(error as Error).message}\n`);
      return 2;
    }
    process.stderr.write(`plotkit: ${(error as Error).message}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
