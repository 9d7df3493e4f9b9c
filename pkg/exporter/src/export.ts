import { readFileSync, writeFileSync } from "fs";
import path from "path";

import { buildDescriptorFile, DescriptorPayload } from "./container.js";
import { UnsupportedInputFormat } from "./errors.js";
import { Matrix, readCsvMatrix, readNpy } from "./npy.js";

export interface ExportSpec {
  /** one input file per ensemble member, each N-by-L */
  inputs: string[];
  variances?: string;
  poses?: string;
  timestamps?: string;
  out: string;
  label: string;
}

export function loadMatrix(file: string): Matrix {
  const buffer = readFileSync(file);
  if (buffer.subarray(0, 6).toString("latin1") === "\x93NUMPY") {
    return readNpy(buffer);
  }
  if (path.extname(file).toLowerCase() === ".csv") {
    return readCsvMatrix(buffer.toString("utf-8"));
  }
  throw new UnsupportedInputFormat(`${file}: neither .npy nor .csv`);
}

export function exportDescriptors(spec: ExportSpec): void {
  const payload: DescriptorPayload = {
    members: spec.inputs.map(loadMatrix),
    variances: spec.variances ? loadMatrix(spec.variances) : undefined,
    poses: spec.poses ? loadMatrix(spec.poses) : undefined,
    timestamps: spec.timestamps ? loadMatrix(spec.timestamps) : undefined,
    label: spec.label,
  };
  writeFileSync(spec.out, buildDescriptorFile(payload));
}
