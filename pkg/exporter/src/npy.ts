import { UnsupportedInputFormat } from "./errors.js";

export interface Matrix {
  rows: number;
  cols: number;
  /** row-major, rows*cols values */
  data: Float64Array;
}

const NPY_MAGIC = Buffer.from("\x93NUMPY", "latin1");

interface NpyHeader {
  descr: string;
  fortranOrder: boolean;
  shape: number[];
}

function parseHeader(text: string): NpyHeader {
  // the header is a Python dict literal; pull the three known fields
  const descr = /'descr':\s*'([^']+)'/.exec(text);
  const fortran = /'fortran_order':\s*(True|False)/.exec(text);
  const shape = /'shape':\s*\(([^)]*)\)/.exec(text);
  if (!descr || !fortran || !shape) {
    throw new UnsupportedInputFormat(`unparseable npy header: ${text.trim()}`);
  }
  const dims = shape[1]
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map((s) => Number.parseInt(s, 10));
  return { descr: descr[1], fortranOrder: fortran[1] === "True", shape: dims };
}

/**
 * Reads a .npy file holding a little-endian float32/float64 array of one or
 * two dimensions. A 1-D array of length n is returned as an n-by-1 matrix.
 */
export function readNpy(buffer: Buffer): Matrix {
  if (buffer.length < 10 || !buffer.subarray(0, 6).equals(NPY_MAGIC)) {
    throw new UnsupportedInputFormat("missing npy magic");
  }
  const major = buffer[6];
  const headerLen =
    major === 1 ? buffer.readUInt16LE(8) : buffer.readUInt32LE(8);
  const headerStart = major === 1 ? 10 : 12;
  const header = parseHeader(
    buffer.subarray(headerStart, headerStart + headerLen).toString("latin1")
  );
  if (header.fortranOrder) {
    throw new UnsupportedInputFormat("fortran-ordered npy arrays not supported");
  }
  if (header.shape.length < 1 || header.shape.length > 2) {
    throw new UnsupportedInputFormat(
      `expected 1-D or 2-D array, got shape (${header.shape.join(", ")})`
    );
  }
  const [rows, cols] =
    header.shape.length === 1 ? [header.shape[0], 1] : header.shape;
  const count = rows * cols;
  const payload = buffer.subarray(headerStart + headerLen);
  const data = new Float64Array(count);
  if (header.descr === "<f4") {
    if (payload.length < count * 4) {
      throw new UnsupportedInputFormat("npy payload shorter than its shape");
    }
    for (let i = 0; i < count; i++) data[i] = payload.readFloatLE(i * 4);
  } else if (header.descr === "<f8") {
    if (payload.length < count * 8) {
      throw new UnsupportedInputFormat("npy payload shorter than its shape");
    }
    for (let i = 0; i < count; i++) data[i] = payload.readDoubleLE(i * 8);
  } else {
    throw new UnsupportedInputFormat(`unsupported dtype ${header.descr}`);
  }
  return { rows, cols, data };
}

/** Parses a headerless numeric CSV into a matrix. */
export function readCsvMatrix(text: string): Matrix {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new UnsupportedInputFormat("empty csv input");
  }
  const rows = lines.map((line) => line.split(",").map((v) => Number(v)));
  const cols = rows[0].length;
  for (const row of rows) {
    if (row.length !== cols || row.some((v) => Number.isNaN(v))) {
      throw new UnsupportedInputFormat("csv rows must be numeric and equal-length");
    }
  }
  const data = new Float64Array(rows.length * cols);
  rows.forEach((row, r) => row.forEach((v, c) => (data[r * cols + c] = v)));
  return { rows: rows.length, cols, data };
}
