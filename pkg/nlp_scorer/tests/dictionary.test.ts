import { describe, expect, it } from "vitest";
import { scoreDictionary, scoreTokens } from "../src/dictionary.js";
import { Lexicon, TextRecord } from "../src/types.js";

const lexicon: Lexicon = {
  positive: new Set(["gain", "rally", "up"]),
  negative: new Set(["loss", "crash", "down"]),
};

function rec(date: string, text: string): TextRecord {
  return { date, text, source: "test" };
}

describe("scoreTokens", () => {
  it("scores 2 positive and 1 negative of 10 tokens as 0.1 exactly", () => {
    const tokens = ["gain", "rally", "loss", "a", "b", "c", "d", "e", "f", "g"];
    expect(scoreTokens(tokens, lexicon)).toBe(0.1);
  });

  it("scores a neutral text as zero", () => {
    const tokens = Array(50).fill("the");
    expect(scoreTokens(tokens, lexicon)).toBe(0);
  });

  it("attains the upper bound when every token is positive", () => {
    expect(scoreTokens(Array(10).fill("gain"), lexicon)).toBe(1.0);
  });

  it("returns null for an empty token list", () => {
    expect(scoreTokens([], lexicon)).toBeNull();
  });

  it("stays within [-1, 1] on random mixes", () => {
    const words = ["gain", "loss", "x", "rally", "crash", "y"];
    for (let n = 1; n < 40; n++) {
      const tokens = Array.from({ length: n }, (_, i) => words[(i * 7 + n) % words.length]);
      const score = scoreTokens(tokens, lexicon)!;
      expect(score).toBeGreaterThanOrEqual(-1);
      expect(score).toBeLessThanOrEqual(1);
    }
  });
});

describe("scoreDictionary", () => {
  it("averages record scores per day", () => {
    // 0.1 and -0.1 average to zero over two texts
    const records = [
      rec("2023-08-01", "gain rally loss a b c d e f g"),
      rec("2023-08-01", "loss crash gain a b c d e f g"),
    ];
    const rows = scoreDictionary(records, lexicon);
    expect(rows).toHaveLength(1);
    expect(rows[0].score).toBe(0);
    expect(rows[0].nTexts).toBe(2);
  });

  it("scores out-of-lexicon-only corpora as zero", () => {
    const rows = scoreDictionary([rec("2023-08-01", "hold on gjd will act")], lexicon);
    expect(rows[0].score).toBe(0);
    expect(rows[0].nTexts).toBe(1);
  });

  it("is permutation-invariant within a day", () => {
    const records = [
      rec("2023-08-01", "gain gain up"),
      rec("2023-08-01", "crash loss down down"),
      rec("2023-08-01", "neutral words only here"),
    ];
    const forward = scoreDictionary(records, lexicon);
    const backward = scoreDictionary([...records].reverse(), lexicon);
    expect(backward).toEqual(forward);
  });

  it("emits empty output for an empty record list", () => {
    expect(scoreDictionary([], lexicon)).toEqual([]);
  });

  it("keeps days sorted", () => {
    const rows = scoreDictionary(
      [rec("2023-08-02", "loss"), rec("2023-08-01", "gain")],
      lexicon,
    );
    expect(rows.map((r) => r.date)).toEqual(["2023-08-01", "2023-08-02"]);
  });
});
