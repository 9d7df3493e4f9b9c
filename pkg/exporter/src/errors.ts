export class ExporterError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Input arrays disagree on entry count or dimension. */
export class ShapeMismatch extends ExporterError {}

/** The input file is neither a supported .npy nor a numeric CSV. */
export class UnsupportedInputFormat extends ExporterError {}
