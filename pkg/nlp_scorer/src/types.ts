/** One dated forum post or message. */
export interface TextRecord {
  /** ISO-8601 calendar date the text was posted (exchange timezone). */
  date: string;
  /** Raw text; must be non-empty after trimming. */
  text: string;
  /** Free-text provenance tag. */
  source: string;
}

/** Positive/negative word sets; the sets must be disjoint and non-empty. */
export interface Lexicon {
  positive: Set<string>;
  negative: Set<string>;
}

/** One output row of the sentiment.csv contract. */
export interface DailyScore {
  date: string;
  /** Mean per-record score, or null for a day with no scorable texts. */
  score: number | null;
  nTexts: number;
}

export type TokenizerChoice = "whitespace" | "intl";

export class ScorerError extends Error {}

/** The requested model weights file is missing or unreadable. */
export class ModelUnavailable extends ScorerError {}

/** Corpus or lexicon file violates its schema. */
export class SchemaError extends ScorerError {}
