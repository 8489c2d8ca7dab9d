#!/usr/bin/env node
/**
 * Render solver CSV tables into SVG figures.
 *
 * Usage: anirabi-plots <specs.json>
 *
 * The JSON file holds one figure spec or an array of them:
 *   { "kind": "spectrum", "inputs": ["spectrum.csv", "exceptional.csv"],
 *     "output": "fig.svg", "axes": {"yMin": -1, "yMax": 4} }
 *
 * Kinds: spectrum | f_zeros | shifted_spectrum | phase.
 */

import { main } from "./main.js";

process.exit(main(process.argv.slice(2)));
