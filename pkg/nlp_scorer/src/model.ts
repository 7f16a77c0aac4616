import { readFileSync } from "node:fs";
import { tokenize } from "./tokenize.js";
import { aggregateDaily } from "./aggregate.js";
import { DailyScore, ModelUnavailable, TextRecord, TokenizerChoice } from "./types.js";

/**
 * Weighted-keyword classifier loaded from a local weights artifact.
 *
 * Signed word weights accumulate into a logit; negators within a two-token
 * window flip the sign of the next sentiment word, intensifiers scale it.
 * The record score is p(pos) - p(neg) of the implied two-class softmax,
 * i.e. tanh(logit / 2), always inside [-1, 1].
 */
export interface ModelWeights {
  weights: Record<string, number>;
  negators: string[];
  intensifiers: Record<string, number>;
  maxTokens: number;
}

export function loadModel(path: string): ModelWeights {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new ModelUnavailable(`model weights not available at ${path}: ${err}`);
  }
  const obj = raw as Partial<ModelWeights>;
  if (!obj.weights || typeof obj.weights !== "object") {
    throw new ModelUnavailable(`model file ${path} has no 'weights' table`);
  }
  return {
    weights: obj.weights,
    negators: obj.negators ?? [],
    intensifiers: obj.intensifiers ?? {},
    maxTokens: obj.maxTokens ?? 512,
  };
}

export interface ModelScoreResult {
  rows: DailyScore[];
  /** Records whose token sequence exceeded maxTokens and was truncated. */
  truncated: number;
}

/** Logit of one token sequence under the weighted-keyword model. */
export function recordLogit(tokens: string[], model: ModelWeights): number {
  const negators = new Set(model.negators);
  let logit = 0;
  for (let i = 0; i < tokens.length; i++) {
    const weight = model.weights[tokens[i]];
    if (weight === undefined) continue;
    let signed = weight;
    for (let back = 1; back <= 2 && i - back >= 0; back++) {
      if (negators.has(tokens[i - back])) {
        signed = -signed;
        break;
      }
    }
    const intensity = i > 0 ? model.intensifiers[tokens[i - 1]] : undefined;
    if (intensity !== undefined) signed *= intensity;
    logit += signed;
  }
  return logit;
}

/**
 * Model route: deterministic classifier scores per record (tanh of half the
 * logit), daily mean aggregation, same output contract as the dictionary
 * route. Over-long records are truncated and counted.
 */
export function scoreModel(
  records: TextRecord[],
  model: ModelWeights,
  tokenizer: TokenizerChoice = "whitespace",
): ModelScoreResult {
  let truncated = 0;
  const scored = records.map((r) => {
    let tokens = tokenize(r.text, tokenizer);
    if (tokens.length > model.maxTokens) {
      tokens = tokens.slice(0, model.maxTokens);
      truncated += 1;
    }
    if (tokens.length === 0) {
      return { date: r.date, score: null };
    }
    return { date: r.date, score: Math.tanh(recordLogit(tokens, model) / 2) };
  });
  return { rows: aggregateDaily(scored), truncated };
}
