/**
 * Embed two literal lists and write the cross-graph similarity TSV.
 *
 * Output contract (what the aligner's --sim-file loader accepts): one row
 * per kept pair, `literal1 TAB literal2 TAB score`, score printed with six
 * decimals, every printed score inside [thetaS, 1].  Literal text is
 * emitted verbatim so the loader can resolve it against the triple files.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { Embedder } from "./embedder.js";
import { norm, topKSimilar } from "./vectors.js";

export interface SimJob {
  /** Path to KG1's literals, one per line. */
  lits1: string;
  /** Path to KG2's literals, one per line. */
  lits2: string;
  /** Model name; "hash-ngram" for the builtin embedder. */
  model: string;
  /** Minimum emitted score. */
  thetaS: number;
  /** Kept counterparts per KG1 literal. */
  topK: number;
  /** Texts embedded per model call. */
  batchSize: number;
  /** Output TSV path. */
  out: string;
}

export interface MatchStats {
  literals1: number;
  literals2: number;
  rows: number;
  model: string;
}

/**
 * Read a one-literal-per-line file: drop blank lines, dedupe, and sort.
 * Sorting by code units makes the output a function of the literal *set*,
 * so reordering an input file cannot change a single output byte.  A tab
 * inside a literal cannot survive a TSV round trip, so such lines are
 * dropped with a warning rather than emitted as broken rows.
 */
export function readLiterals(path: string, warn: (msg: string) => void = console.error): string[] {
  const seen = new Set<string>();
  const lines = readFileSync(path, { encoding: "utf-8" }).split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!.endsWith("\r") ? lines[i]!.slice(0, -1) : lines[i]!;
    if (line === "") continue;
    if (line.includes("\t")) {
      warn(`${path}:${i + 1}: literal contains a tab, skipped`);
      continue;
    }
    seen.add(line);
  }
  return [...seen].sort();
}

/** Embed in fixed-size batches; batches run concurrently, order is kept. */
export async function embedBatched(
  embedder: Embedder,
  texts: string[],
  batchSize: number,
): Promise<Float64Array[]> {
  const batches: Promise<Float64Array[]>[] = [];
  for (let start = 0; start < texts.length; start += batchSize) {
    batches.push(embedder.embed(texts.slice(start, start + batchSize)));
  }
  return (await Promise.all(batches)).flat();
}

/**
 * Score every KG1 literal against every KG2 literal (exact, no index) and
 * keep the topK at or above thetaS per KG1 literal.  Scores are filtered on
 * their *printed* six-decimal form, so a reader parsing the file back can
 * never see a value below thetaS.
 */
export async function embedAndMatch(job: SimJob, embedder: Embedder): Promise<MatchStats> {
  const lits1 = readLiterals(job.lits1);
  const lits2 = readLiterals(job.lits2);

  const vecs1 = await embedBatched(embedder, lits1, job.batchSize);
  const vecs2 = await embedBatched(embedder, lits2, job.batchSize);
  const norms2 = vecs2.map(norm);

  const rows: string[] = [];
  for (let i = 0; i < lits1.length; i++) {
    const hits = topKSimilar(vecs1[i]!, norm(vecs1[i]!), vecs2, norms2, job.topK, job.thetaS);
    for (const hit of hits) {
      const printed = hit.score.toFixed(6);
      if (Number.parseFloat(printed) < job.thetaS) continue;
      rows.push(`${lits1[i]}\t${lits2[hit.index]}\t${printed}`);
    }
  }
  writeFileSync(job.out, rows.map((r) => r + "\n").join(""), { encoding: "utf-8" });
  return { literals1: lits1.length, literals2: lits2.length, rows: rows.length, model: embedder.name };
}
