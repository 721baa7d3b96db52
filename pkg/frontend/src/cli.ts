#!/usr/bin/env node
/**
 * hsrsim-plots command line: renders one experiment CSV to SVG.
 *
 *   node dist/cli.js render --fig 3 --in results/sinr.csv --out fig3.svg
 */

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaError } from "./csv.js";
import { FIGURES, renderFigure } from "./figures.js";

yargs(hideBin(process.argv))
  .scriptName("hsrsim-plots")
  .command(
    "render",
    "render one figure from a CSV file",
    (y) =>
      y
        .option("fig", {
          type: "string",
          demandOption: true,
          describe: `figure number (${FIGURES.join(", ")})`,
        })
        .option("in", {
          type: "string",
          demandOption: true,
          describe: "input CSV written by `hsrsim run`",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "output SVG path",
        }),
    (argv) => {
      let text: string;
      try {
        text = readFileSync(argv.in, "utf8");
      } catch (err) {
        console.error(`cannot read ${argv.in}: ${(err as Error).message}`);
        process.exit(2);
      }
      try {
        const svg = renderFigure(argv.fig, text);
        writeFileSync(argv.out, svg);
        console.error(`wrote ${argv.out}`);
      } catch (err) {
        if (err instanceof SchemaError) {
          console.error(err.message);
          process.exit(3);
        }
        console.error((err as Error).message);
        process.exit(1);
      }
    },
  )
  .demandCommand(1, "specify a command (try: render)")
  .strict()
  .parse();
