export { aggregateDaily } from "./aggregate.js";
export { loadCorpus, parseCsv, writeScores } from "./csv.js";
export { scoreDictionary, scoreTokens } from "./dictionary.js";
export { loadLexicon } from "./lexicon.js";
export { loadModel, recordLogit, scoreModel } from "./model.js";
export { intlTokens, tokenize, whitespaceTokens } from "./tokenize.js";
export * from "./types.js";
