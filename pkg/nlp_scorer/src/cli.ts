#!/usr/bin/env node
/**
 * score --method dictionary|model --corpus PATH --out PATH
 *       [--lexicon PATH] [--model PATH] [--tokenizer whitespace|intl]
 *
 * Reads corpus.csv (date, text, source) and writes the sentiment.csv
 * contract (date, score, n_texts).
 */
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { loadCorpus, writeScores } from "./csv.js";
import { scoreDictionary } from "./dictionary.js";
import { loadLexicon } from "./lexicon.js";
import { loadModel, scoreModel } from "./model.js";
import { ScorerError, TokenizerChoice } from "./types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const DEFAULT_LEXICON = join(HERE, "..", "data", "lexicon.json");
const DEFAULT_MODEL = join(HERE, "..", "data", "model.json");

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (argv[i].startsWith("--")) {
      args.set(argv[i].slice(2), argv[i + 1] ?? "");
      i++;
    }
  }
  return args;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "score") {
    process.stderr.write("usage: nlp-score score --method dictionary|model --corpus PATH --out PATH\n");
    return 2;
  }
  const args = parseArgs(rest);
  const method = args.get("method") ?? "dictionary";
  const corpusPath = args.get("corpus");
  const outPath = args.get("out");
  const tokenizer = (args.get("tokenizer") ?? "whitespace") as TokenizerChoice;
  if (!corpusPath || !outPath) {
    process.stderr.write("config-error: --corpus and --out are required\n");
    return 2;
  }

  try {
    const { records, rejected } = loadCorpus(corpusPath);
    if (rejected.length > 0) {
      for (const [line, reason] of rejected) {
        process.stderr.write(`rejected line ${line}: ${reason}\n`);
      }
    }
    if (method === "dictionary") {
      const lexicon = loadLexicon(args.get("lexicon") ?? DEFAULT_LEXICON);
      writeScores(outPath, scoreDictionary(records, lexicon, tokenizer), "dictionary");
    } else if (method === "model") {
      const model = loadModel(args.get("model") ?? DEFAULT_MODEL);
      const { rows, truncated } = scoreModel(records, model, tokenizer);
      if (truncated > 0) {
        process.stderr.write(`truncated ${truncated} over-long records\n`);
      }
      writeScores(outPath, rows, "model");
    } else {
      process.stderr.write(`config-error: unknown method '${method}'\n`);
      return 2;
    }
  } catch (err) {
    if (err instanceof ScorerError) {
      process.stderr.write(`data-error: ${err.message}\n`);
      return 3;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
