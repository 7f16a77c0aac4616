import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";
import { loadCorpus } from "../src/csv.js";
import { loadModel, recordLogit, scoreModel } from "../src/model.js";
import { ModelUnavailable, TextRecord } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const MODEL_PATH = join(HERE, "..", "data", "model.json");
const MICRO_CORPUS = join(HERE, "..", "fixtures", "micro_corpus.csv");

// hand labels for the three micro-corpus days
const DAY_LABELS: Record<string, number> = {
  "2023-08-01": 1,
  "2023-08-02": -1,
  "2023-08-03": 1,
};

function rec(date: string, text: string): TextRecord {
  return { date, text, source: "test" };
}

describe("model scoring", () => {
  const model = loadModel(MODEL_PATH);

  it("raises ModelUnavailable when the weights file is missing", () => {
    expect(() => loadModel("/nonexistent/model.json")).toThrow(ModelUnavailable);
  });

  it("is deterministic: a duplicated record scores identically", () => {
    const records = [rec("2023-08-01", "strong rally today"), rec("2023-08-01", "strong rally today")];
    const { rows } = scoreModel(records, model);
    const single = scoreModel(records.slice(0, 1), model).rows;
    expect(rows[0].score).toBe(single[0].score);
    expect(rows[0].nTexts).toBe(2);
  });

  it("keeps every score inside [-1, 1]", () => {
    const blast = rec("2023-08-01", Array(200).fill("crash").join(" "));
    const { rows } = scoreModel([blast], model);
    expect(rows[0].score!).toBeGreaterThanOrEqual(-1);
    expect(rows[0].score!).toBeLessThanOrEqual(1);
  });

  it("flips polarity under negation", () => {
    const plain = recordLogit(["strong", "rally"], model);
    const negated = recordLogit(["not", "a", "strong", "rally"], model);
    expect(plain).toBeGreaterThan(0);
    expect(negated).toBeLessThan(plain);
  });

  it("scales polarity under intensifiers", () => {
    const plain = recordLogit(["weak", "demand"], model);
    const intense = recordLogit(["extremely", "weak", "demand"], model);
    expect(intense).toBeLessThan(plain);
  });

  it("truncates over-long records and counts them", () => {
    const small = { ...model, maxTokens: 5 };
    const { rows, truncated } = scoreModel([rec("2023-08-01", "a b c d e gain gain gain")], small);
    expect(truncated).toBe(1);
    expect(rows[0].score).toBe(0); // the positive tail fell off
  });

  it("agrees with the hand labels on at least 2 of 3 micro-corpus days", () => {
    const { records } = loadCorpus(MICRO_CORPUS);
    expect(records).toHaveLength(30);
    const { rows } = scoreModel(records, model);
    expect(rows).toHaveLength(3);
    let agree = 0;
    for (const row of rows) {
      if (Math.sign(row.score!) === DAY_LABELS[row.date]) agree++;
    }
    expect(agree).toBeGreaterThanOrEqual(2);
  });
});
