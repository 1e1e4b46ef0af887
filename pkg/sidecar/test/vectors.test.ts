import { describe, expect, it } from "vitest";

import { clampScore, cosine, dot, norm, topKSimilar } from "../src/vectors";

const v = (...xs: number[]) => Float64Array.from(xs);

describe("dot and norm", () => {
  it("computes the inner product", () => {
    expect(dot(v(1, 2, 3), v(4, 5, 6))).toBe(32);
  });

  it("rejects mismatched lengths", () => {
    expect(() => dot(v(1), v(1, 2))).toThrow(/length mismatch/);
  });

  it("norm of a 3-4-5 triangle leg pair", () => {
    expect(norm(v(3, 4))).toBe(5);
  });
});

describe("cosine", () => {
  it("is 1 for parallel vectors", () => {
    const a = v(2, 0);
    const b = v(7, 0);
    expect(cosine(a, b, norm(a), norm(b))).toBe(1);
  });

  it("is 0 for orthogonal vectors", () => {
    const a = v(1, 0);
    const b = v(0, 1);
    expect(cosine(a, b, norm(a), norm(b))).toBe(0);
  });

  it("is -1 for opposite vectors", () => {
    const a = v(1, 1);
    const b = v(-1, -1);
    expect(cosine(a, b, norm(a), norm(b))).toBeCloseTo(-1, 12);
  });

  it("treats the zero vector as similar to nothing", () => {
    const z = v(0, 0);
    const a = v(1, 0);
    expect(cosine(z, a, norm(z), norm(a))).toBe(0);
  });
});

describe("clampScore", () => {
  it("maps negative cosine to 0, not to a rescaled value", () => {
    expect(clampScore(-1)).toBe(0);
    expect(clampScore(-0.25)).toBe(0);
  });

  it("caps rounding spill above 1", () => {
    expect(clampScore(1 + 1e-12)).toBe(1);
  });

  it("passes interior values through unchanged", () => {
    expect(clampScore(0.62)).toBe(0.62);
  });
});

describe("topKSimilar", () => {
  const candidates = [v(1, 0), v(0, 1), v(1, 1), v(-1, 0)];
  const norms = candidates.map(norm);

  it("ranks by clamped cosine, best first", () => {
    const hits = topKSimilar(v(1, 0), 1, candidates, norms, 10, 0.1);
    expect(hits.map((h) => h.index)).toEqual([0, 2]);
    expect(hits[0]!.score).toBe(1);
    expect(hits[1]!.score).toBeCloseTo(Math.SQRT1_2, 12);
  });

  it("keeps at most k rows", () => {
    const hits = topKSimilar(v(1, 1), norm(v(1, 1)), candidates, norms, 2, 0);
    expect(hits).toHaveLength(2);
    expect(hits[0]!.index).toBe(2);
  });

  it("drops scores below the threshold even when k has room", () => {
    const hits = topKSimilar(v(1, 0), 1, candidates, norms, 10, 0.9);
    expect(hits.map((h) => h.index)).toEqual([0]);
  });

  it("excludes anti-parallel candidates at threshold 0 via the clamp", () => {
    const hits = topKSimilar(v(1, 0), 1, candidates, norms, 10, 0.001);
    expect(hits.map((h) => h.index)).not.toContain(3);
  });

  it("breaks score ties toward the lower index", () => {
    const twins = [v(2, 0), v(1, 0), v(3, 0)];
    const hits = topKSimilar(v(1, 0), 1, twins, twins.map(norm), 2, 0);
    expect(hits.map((h) => h.index)).toEqual([0, 1]);
  });
});
