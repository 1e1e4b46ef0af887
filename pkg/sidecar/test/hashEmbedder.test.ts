import { describe, expect, it } from "vitest";

import { hashEmbedder, hashVector } from "../src/hashEmbedder";
import { embedBatched } from "../src/match";
import { cosine, norm } from "../src/vectors";

function cos(a: string, b: string): number {
  const va = hashVector(a);
  const vb = hashVector(b);
  return cosine(va, vb, norm(va), norm(vb));
}

describe("hashVector", () => {
  it("is a pure function of the text", () => {
    expect(hashVector("Pretoria")).toEqual(hashVector("Pretoria"));
  });

  it("ignores case and whitespace runs", () => {
    expect(hashVector("Cape  Town")).toEqual(hashVector("cape town"));
    expect(hashVector("  Cape Town \t")).toEqual(hashVector("Cape Town"));
  });

  it("gives equal texts cosine 1 and unrelated texts near 0", () => {
    expect(cos("Bloemfontein", "Bloemfontein")).toBeCloseTo(1, 12);
    expect(Math.abs(cos("Bloemfontein", "xyzzy"))).toBeLessThan(0.3);
  });

  it("scores a typo higher than a different word", () => {
    const typo = cos("Bloemfontein", "Bloomfontein");
    const other = cos("Bloemfontein", "Johannesburg");
    expect(typo).toBeGreaterThan(0.6);
    expect(typo).toBeGreaterThan(other);
  });

  it("embeds the empty string as the zero vector", () => {
    expect(norm(hashVector(""))).toBe(0);
    expect(norm(hashVector("   "))).toBe(0);
  });

  it("handles non-ASCII text", () => {
    expect(hashVector("München")).toEqual(hashVector("münchen"));
    expect(cos("München", "Muenchen")).toBeGreaterThan(0);
  });
});

describe("embedBatched", () => {
  it("returns the same vectors regardless of batch size", async () => {
    const texts = ["a", "bb", "ccc", "dddd", "eeeee", "ffffff", "g"];
    const embedder = hashEmbedder();
    const whole = await embedBatched(embedder, texts, 100);
    const tiny = await embedBatched(embedder, texts, 2);
    expect(tiny).toEqual(whole);
    expect(whole).toHaveLength(texts.length);
  });

  it("embeds the empty list", async () => {
    expect(await embedBatched(hashEmbedder(), [], 4)).toEqual([]);
  });
});
