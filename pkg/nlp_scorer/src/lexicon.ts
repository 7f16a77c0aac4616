import { readFileSync } from "node:fs";
import { Lexicon, SchemaError } from "./types.js";

/**
 * Load a lexicon from JSON: {"positive": [...], "negative": [...]}.
 * The two sets must be non-empty and disjoint.
 */
export function loadLexicon(path: string): Lexicon {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new SchemaError(`cannot read lexicon ${path}: ${err}`);
  }
  const obj = raw as { positive?: string[]; negative?: string[] };
  if (!Array.isArray(obj.positive) || !Array.isArray(obj.negative)) {
    throw new SchemaError("lexicon must have 'positive' and 'negative' word arrays");
  }
  const positive = new Set(obj.positive.map((w) => w.toLowerCase()));
  const negative = new Set(obj.negative.map((w) => w.toLowerCase()));
  if (positive.size === 0 || negative.size === 0) {
    throw new SchemaError("lexicon word sets must be non-empty");
  }
  for (const word of positive) {
    if (negative.has(word)) {
      throw new SchemaError(`word '${word}' appears in both polarity sets`);
    }
  }
  return { positive, negative };
}
