#!/usr/bin/env node
/**
 * figs render <figure_id> --csv <file> [--csv <file> ...] --out <image.svg>
 *
 * Renders a kerrcat result CSV (plus optional JSON sidecar metadata for
 * legend labels) into a static SVG figure.  Exit codes: 0 ok, 2 usage or
 * header-validation error.
 */

import { CsvError } from "./csv.js";
import { FIGURES } from "./figures.js";
import { renderFigure } from "./render.js";

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === "list") {
    for (const id of Object.keys(FIGURES).sort()) console.log(id);
    return 0;
  }
  if (command !== "render") {
    console.error("usage: figs render <figure_id> --csv FILE [--csv FILE ...] --out FILE.svg");
    console.error("       figs list");
    return 2;
  }
  const figureId = rest[0];
  const csvs: string[] = [];
  let out = "";
  for (let i = 1; i < rest.length; i++) {
    if (rest[i] === "--csv" && i + 1 < rest.length) {
      csvs.push(rest[++i]);
    } else if (rest[i] === "--out" && i + 1 < rest.length) {
      out = rest[++i];
    } else {
      console.error(`figs: unknown argument ${rest[i]}`);
      return 2;
    }
  }
  if (!figureId || !out || csvs.length === 0) {
    console.error("figs: need <figure_id>, at least one --csv, and --out");
    return 2;
  }
  try {
    renderFigure(figureId, csvs, out);
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`figs: ${err.message}`);
      return 2;
    }
    throw err;
  }
  console.log(`wrote ${out}`);
  return 0;
}

import { fileURLToPath } from "node:url";

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
