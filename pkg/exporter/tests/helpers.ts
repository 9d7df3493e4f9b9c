import { Matrix } from "../src/npy.js";

export function matrix(rows: number, cols: number, fill: (i: number) => number): Matrix {
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < data.length; i++) data[i] = fill(i);
  return { rows, cols, data };
}

/** Serializes a matrix as a version-1.0 .npy buffer. */
export function npyBytes(m: Matrix, descr: "<f4" | "<f8", oneDim = false): Buffer {
  const shape = oneDim ? `(${m.rows},)` : `(${m.rows}, ${m.cols})`;
  let header = `{'descr': '${descr}', 'fortran_order': False, 'shape': ${shape}, }`;
  const unpadded = 10 + header.length + 1;
  header = header.padEnd(header.length + (64 - (unpadded % 64)) % 64) + "\n";
  const head = Buffer.alloc(10 + header.length);
  head.write("\x93NUMPY", 0, "latin1");
  head[6] = 1;
  head[7] = 0;
  head.writeUInt16LE(header.length, 8);
  head.write(header, 10, "latin1");
  const itemsize = descr === "<f4" ? 4 : 8;
  const body = Buffer.allocUnsafe(m.data.length * itemsize);
  m.data.forEach((v, i) =>
    descr === "<f4" ? body.writeFloatLE(Math.fround(v), i * 4) : body.writeDoubleLE(v, i * 8)
  );
  return Buffer.concat([head, body]);
}

export function mulberry(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
