#!/usr/bin/env node
import yargs from "yargs";

import { ExporterError } from "./errors.js";
import { exportDescriptors } from "./export.js";

function buildParser() {
  return yargs()
    .scriptName("uapr-export")
    .usage(
      "Converts saved descriptor arrays (.npy or numeric .csv) into a UAPR descriptor file"
    )
    .option("input", {
      alias: "i",
      type: "string",
      array: true,
      demandOption: true,
      describe: "descriptor array, N x L; repeat for ensemble members",
    })
    .option("variances", { type: "string", describe: "per-dimension variances, N x L" })
    .option("poses", { type: "string", describe: "poses, N x 3" })
    .option("timestamps", { type: "string", describe: "timestamps, length N" })
    .option("out", {
      alias: "o",
      type: "string",
      demandOption: true,
      describe: "output descriptor file",
    })
    .option("label", { type: "string", default: "", describe: "manifest label" })
    .strict()
    .exitProcess(false);
}

export function main(argv: string[]): number {
  let opts;
  try {
    opts = buildParser().parseSync(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  try {
    exportDescriptors({
      inputs: opts.input,
      variances: opts.variances,
      poses: opts.poses,
      timestamps: opts.timestamps,
      out: opts.out,
      label: opts.label,
    });
  } catch (err) {
    if (err instanceof ExporterError || (err as NodeJS.ErrnoException).code) {
      console.error(`${(err as Error).name}: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
