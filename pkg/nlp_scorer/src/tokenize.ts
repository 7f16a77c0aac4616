import { TokenizerChoice } from "./types.js";

const EDGE_PUNCTUATION = /^[^\p{L}\p{N}]+|[^\p{L}\p{N}]+$/gu;

/**
 * Whitespace tokenizer: split on runs of whitespace, strip punctuation from
 * token edges, lowercase. Suited to space-delimited test corpora.
 */
export function whitespaceTokens(text: string): string[] {
  return text
    .split(/\s+/)
    .map((t) => t.replace(EDGE_PUNCTUATION, "").toLowerCase())
    .filter((t) => t.length > 0);
}

/**
 * Word segmentation via Intl.Segmenter (ICU), which handles scripts without
 * spaces between words, Chinese included. Deterministic for a fixed runtime.
 */
export function intlTokens(text: string): string[] {
  const segmenter = new Intl.Segmenter(undefined, { granularity: "word" });
  const tokens: string[] = [];
  for (const seg of segmenter.segment(text)) {
    if (seg.isWordLike) {
      tokens.push(seg.segment.toLowerCase());
    }
  }
  return tokens;
}

export function tokenize(text: string, choice: TokenizerChoice): string[] {
  return choice === "intl" ? intlTokens(text) : whitespaceTokens(text);
}
