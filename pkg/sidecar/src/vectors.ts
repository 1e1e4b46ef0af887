/** Dense vector helpers for the exact nearest-neighbor search. */

export function dot(a: Float64Array, b: Float64Array): number {
  if (a.length !== b.length) {
    throw new Error(`vector length mismatch (${a.length} vs ${b.length})`);
  }
  let sum = 0;
  for (let i = 0; i < a.length; i++) {
    sum += a[i]! * b[i]!;
  }
  return sum;
}

export function norm(v: Float64Array): number {
  let sum = 0;
  for (let i = 0; i < v.length; i++) {
    sum += v[i]! * v[i]!;
  }
  return Math.sqrt(sum);
}

/**
 * Cosine similarity of two vectors given their precomputed norms.
 * A zero vector has no direction, so its similarity to anything is 0.
 */
export function cosine(
  a: Float64Array,
  b: Float64Array,
  normA: number,
  normB: number,
): number {
  if (normA === 0 || normB === 0) return 0;
  return dot(a, b) / (normA * normB);
}

/**
 * Clamp a raw cosine from [-1, 1] into [0, 1].  Negative similarity carries
 * no alignment evidence, so it maps to 0 rather than being rescaled; values
 * a rounding error above 1 come back down to exactly 1.
 */
export function clampScore(s: number): number {
  if (s <= 0) return 0;
  if (s >= 1) return 1;
  return s;
}

export interface Scored {
  /** Index into the candidate matrix. */
  index: number;
  /** Clamped cosine similarity in [0, 1]. */
  score: number;
}

/**
 * Exact top-k search: score the query against every candidate, clamp, and
 * keep the k best at or above the threshold.  Ties break toward the lower
 * index so results never depend on sort stability.
 */
export function topKSimilar(
  query: Float64Array,
  queryNorm: number,
  candidates: Float64Array[],
  candidateNorms: number[],
  k: number,
  threshold: number,
): Scored[] {
  const scored: Scored[] = [];
  for (let i = 0; i < candidates.length; i++) {
    const s = clampScore(cosine(query, candidates[i]!, queryNorm, candidateNorms[i]!));
    if (s >= threshold) {
      scored.push({ index: i, score: s });
    }
  }
  scored.sort((x, y) => y.score - x.score || x.index - y.index);
  return scored.slice(0, k);
}
