/** Embedder interface and model-name resolution. */

export interface Embedder {
  readonly name: string;
  /** Map texts to vectors, one per text, in order.  Any fixed dimension. */
  embed(texts: string[]): Promise<Float64Array[]>;
}

/** Raised when the requested model cannot be loaded. */
export class ModelLoadError extends Error {}

/**
 * Resolve a --model value.  The builtin "hash-ngram" needs no downloads;
 * any other name is treated as a feature-extraction model id for the
 * optional @huggingface/transformers runtime (e.g. "Xenova/LaBSE").
 */
export async function resolveEmbedder(model: string): Promise<Embedder> {
  const { hashEmbedder, HASH_MODEL_NAME } = await import("./hashEmbedder.js");
  if (model === HASH_MODEL_NAME) {
    return hashEmbedder();
  }
  return await transformersEmbedder(model);
}

async function transformersEmbedder(model: string): Promise<Embedder> {
  let transformers: any;
  try {
    transformers = await import("@huggingface/transformers" as string);
  } catch {
    throw new ModelLoadError(
      `model "${model}" requires the optional dependency @huggingface/transformers ` +
        `(npm install @huggingface/transformers); ` +
        `the builtin "hash-ngram" model runs without it`,
    );
  }
  let extractor: any;
  try {
    extractor = await transformers.pipeline("feature-extraction", model);
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    throw new ModelLoadError(`cannot load model "${model}": ${detail}`);
  }
  return {
    name: model,
    async embed(texts: string[]): Promise<Float64Array[]> {
      const out = await extractor(texts, { pooling: "mean", normalize: true });
      const [rows, cols] = out.dims as [number, number];
      const flat: Float32Array = out.data;
      const vectors: Float64Array[] = [];
      for (let i = 0; i < rows; i++) {
        vectors.push(Float64Array.from(flat.subarray(i * cols, (i + 1) * cols)));
      }
      return vectors;
    },
  };
}
