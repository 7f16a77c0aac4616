import { tokenize } from "./tokenize.js";
import { DailyScore, Lexicon, TextRecord, TokenizerChoice } from "./types.js";
import { aggregateDaily } from "./aggregate.js";

/**
 * Net polarity fraction of one token list: (nPos - nNeg) / nTotal.
 * Out-of-lexicon tokens count toward the denominator only.
 * Returns null for an empty token list (nothing to score).
 */
export function scoreTokens(tokens: string[], lexicon: Lexicon): number | null {
  if (tokens.length === 0) {
    return null;
  }
  let nPos = 0;
  let nNeg = 0;
  for (const token of tokens) {
    if (lexicon.positive.has(token)) nPos += 1;
    else if (lexicon.negative.has(token)) nNeg += 1;
  }
  return (nPos - nNeg) / tokens.length;
}

/**
 * Dictionary route: score each record by its net polarity fraction, then
 * average per day. Days whose records all fail to tokenize are emitted with
 * an empty score and nTexts = 0.
 */
export function scoreDictionary(
  records: TextRecord[],
  lexicon: Lexicon,
  tokenizer: TokenizerChoice = "whitespace",
): DailyScore[] {
  const scored = records.map((r) => ({
    date: r.date,
    score: scoreTokens(tokenize(r.text, tokenizer), lexicon),
  }));
  return aggregateDaily(scored);
}
