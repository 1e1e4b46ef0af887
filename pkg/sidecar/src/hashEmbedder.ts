/**
 * Self-contained deterministic text embedder: hashed character n-grams.
 *
 * Each 1–4 gram of the normalized text is hashed into one of `dim` signed
 * buckets (the feature-hashing trick).  Equal texts get equal vectors, so
 * cosine self-similarity is 1; unrelated texts share few buckets and land
 * near 0.  No model download, no weights — the vector is a pure function of
 * the input bytes, which keeps runs byte-identical across machines.  Use a
 * real sentence-embedding model for semantic matching; use this one for
 * tests, offline runs and surface-form matching.
 */

import { Embedder } from "./embedder.js";

export const HASH_MODEL_NAME = "hash-ngram";

const DIM = 512;
const MIN_GRAM = 1;
const MAX_GRAM = 4;

const encoder = new TextEncoder();

/** FNV-1a over UTF-8 bytes, 32-bit; seeds distinguish n-gram lengths. */
function fnv1a(bytes: Uint8Array, seed: number): number {
  let h = (0x811c9dc5 ^ seed) >>> 0;
  for (let i = 0; i < bytes.length; i++) {
    h ^= bytes[i]!;
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h;
}

function normalize(text: string): string {
  return text.toLowerCase().replace(/\s+/g, " ").trim();
}

/** Embed one text: accumulate signed n-gram counts, without normalization. */
export function hashVector(text: string): Float64Array {
  const v = new Float64Array(DIM);
  const s = normalize(text);
  for (let n = MIN_GRAM; n <= MAX_GRAM; n++) {
    for (let i = 0; i + n <= s.length; i++) {
      const h = fnv1a(encoder.encode(s.slice(i, i + n)), n);
      const sign = (h & 1) === 0 ? 1 : -1;
      const bucket = (h >>> 1) % DIM;
      v[bucket] = v[bucket]! + sign;
    }
  }
  return v;
}

export function hashEmbedder(): Embedder {
  return {
    name: HASH_MODEL_NAME,
    async embed(texts: string[]): Promise<Float64Array[]> {
      return texts.map(hashVector);
    },
  };
}
