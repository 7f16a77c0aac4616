import { DailyScore } from "./types.js";

/**
 * Mean per-record score per calendar date, output sorted by date.
 * Records with a null score (nothing tokenizable) do not count toward the
 * mean or nTexts; a day left with no scorable records emits score null.
 */
export function aggregateDaily(
  scored: ReadonlyArray<{ date: string; score: number | null }>,
): DailyScore[] {
  const byDate = new Map<string, { sum: number; n: number }>();
  for (const record of scored) {
    const slot = byDate.get(record.date) ?? { sum: 0, n: 0 };
    if (record.score !== null) {
      slot.sum += record.score;
      slot.n += 1;
    }
    byDate.set(record.date, slot);
  }
  return [...byDate.keys()].sort().map((date) => {
    const { sum, n } = byDate.get(date)!;
    return { date, score: n > 0 ? sum / n : null, nTexts: n };
  });
}
