import { readFileSync } from "fs";

import { SchemaError } from "./csv.js";
import { SpecError, validateSpec } from "./figures.js";
import { renderFigures } from "./render.js";

/** Entry point shared by the CLI wrapper and the tests. */
export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: anirabi-plots <specs.json>");
    return 2;
  }
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(argv[0], "utf8"));
  } catch (err) {
    console.error(`cannot read spec file: ${(err as Error).message}`);
    return 2;
  }
  try {
    const specs = (Array.isArray(raw) ? raw : [raw]).map(validateSpec);
    for (const path of renderFigures(specs)) {
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SpecError) {
      console.error(`bad figure spec: ${err.message}`);
      return 2;
    }
    if (err instanceof SchemaError) {
      console.error(`input does not match the table schema: ${err.message}`);
      return 1;
    }
    throw err;
  }
}
