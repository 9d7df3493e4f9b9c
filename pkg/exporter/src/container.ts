import { ShapeMismatch } from "./errors.js";
import type { Matrix } from "./npy.js";

const MAGIC = Buffer.from("UAPR", "ascii");
const VERSION = 1;

export interface DescriptorPayload {
  /** ensemble members, each an N-by-L matrix */
  members: Matrix[];
  variances?: Matrix;
  poses?: Matrix;
  timestamps?: Matrix;
  label: string;
}

function checkShapes(payload: DescriptorPayload): { n: number; dim: number } {
  if (payload.members.length === 0) {
    throw new ShapeMismatch("at least one member array is required");
  }
  const { rows: n, cols: dim } = payload.members[0];
  if (n < 1 || dim < 1) {
    throw new ShapeMismatch("member arrays must be non-empty");
  }
  for (const m of payload.members) {
    if (m.rows !== n || m.cols !== dim) {
      throw new ShapeMismatch(
        `member shape ${m.rows}x${m.cols} disagrees with ${n}x${dim}`
      );
    }
  }
  if (payload.members.length > 1 && payload.variances) {
    throw new ShapeMismatch("variances only apply to single-member sets");
  }
  if (payload.variances) {
    const v = payload.variances;
    if (v.rows !== n || v.cols !== dim) {
      throw new ShapeMismatch(`variances must be ${n}x${dim}, got ${v.rows}x${v.cols}`);
    }
    for (const value of v.data) {
      if (!(value > 0)) {
        throw new ShapeMismatch("variances must be strictly positive");
      }
    }
  }
  if (payload.poses && (payload.poses.rows !== n || payload.poses.cols !== 3)) {
    throw new ShapeMismatch(
      `poses must be ${n}x3, got ${payload.poses.rows}x${payload.poses.cols}`
    );
  }
  if (
    payload.timestamps &&
    (payload.timestamps.rows !== n || payload.timestamps.cols !== 1)
  ) {
    throw new ShapeMismatch(`timestamps must be a length-${n} vector`);
  }
  return { n, dim };
}

function f32Bytes(values: ArrayLike<number>): Buffer {
  const buf = Buffer.allocUnsafe(values.length * 4);
  for (let i = 0; i < values.length; i++) buf.writeFloatLE(values[i], i * 4);
  return buf;
}

function f64Bytes(values: ArrayLike<number>): Buffer {
  const buf = Buffer.allocUnsafe(values.length * 8);
  for (let i = 0; i < values.length; i++) buf.writeDoubleLE(values[i], i * 8);
  return buf;
}

/** Serializes a descriptor payload into a version-1 container blob. */
export function buildDescriptorFile(payload: DescriptorPayload): Buffer {
  const { n, dim } = checkShapes(payload);
  const manifest = {
    count: n,
    dim,
    has_poses: payload.poses !== undefined,
    has_timestamps: payload.timestamps !== undefined,
    has_variances: payload.variances !== undefined,
    label: payload.label,
    members: payload.members.length,
  };
  const blob = Buffer.from(JSON.stringify(manifest), "utf-8");
  const header = Buffer.allocUnsafe(10);
  MAGIC.copy(header, 0);
  header.writeUInt16LE(VERSION, 4);
  header.writeUInt32LE(blob.length, 6);

  const parts: Uint8Array[] = [header, blob];
  for (const m of payload.members) parts.push(f32Bytes(m.data));
  if (payload.variances) parts.push(f32Bytes(payload.variances.data));
  if (payload.poses) parts.push(f64Bytes(payload.poses.data));
  if (payload.timestamps) parts.push(f64Bytes(payload.timestamps.data));
  return Buffer.concat(parts);
}
