#!/usr/bin/env node
/**
 * flora-embed: embed literals from two knowledge graphs and write the
 * similarity TSV the aligner consumes via --sim-file.
 *
 * Exit codes: 0 ok, 1 model load or matching failure, 2 usage error.
 * Progress goes to stderr; the output file is the only data channel.
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { ModelLoadError, resolveEmbedder } from "./embedder.js";
import { embedAndMatch, SimJob } from "./match.js";

const USAGE = `usage: flora-embed --lits1 FILE --lits2 FILE --model NAME --out FILE
                   [--theta-s X] [--top-k N] [--batch-size N]

  --lits1 FILE      string literals of KG1, one per line
  --lits2 FILE      string literals of KG2, one per line
  --model NAME      "hash-ngram" (builtin, offline) or a
                    @huggingface/transformers feature-extraction model id
  --out FILE        similarity TSV to write
  --theta-s X       minimum emitted cosine similarity (default 0.7)
  --top-k N         counterparts kept per KG1 literal (default 10)
  --batch-size N    texts embedded per model call (default 64)
`;

export function parseJob(argv: string[]): SimJob {
  const { values } = parseArgs({
    args: argv,
    options: {
      lits1: { type: "string" },
      lits2: { type: "string" },
      model: { type: "string" },
      out: { type: "string" },
      "theta-s": { type: "string", default: "0.7" },
      "top-k": { type: "string", default: "10" },
      "batch-size": { type: "string", default: "64" },
      help: { type: "boolean", short: "h", default: false },
    },
  });
  if (values.help) {
    process.stdout.write(USAGE);
    process.exit(0);
  }
  for (const flag of ["lits1", "lits2", "model", "out"] as const) {
    if (!values[flag]) throw new UsageError(`--${flag} is required`);
  }
  const thetaS = Number(values["theta-s"]);
  if (!Number.isFinite(thetaS) || thetaS < 0 || thetaS > 1) {
    throw new UsageError(`--theta-s must be in [0, 1], got ${values["theta-s"]}`);
  }
  const topK = Number(values["top-k"]);
  if (!Number.isInteger(topK) || topK < 1) {
    throw new UsageError(`--top-k must be a positive integer, got ${values["top-k"]}`);
  }
  const batchSize = Number(values["batch-size"]);
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new UsageError(`--batch-size must be a positive integer, got ${values["batch-size"]}`);
  }
  return {
    lits1: values.lits1!,
    lits2: values.lits2!,
    model: values.model!,
    thetaS,
    topK,
    batchSize,
    out: values.out!,
  };
}

export class UsageError extends Error {}

export async function main(argv: string[]): Promise<number> {
  let job: SimJob;
  try {
    job = parseJob(argv);
  } catch (err) {
    const msg = err instanceof Error ? err.message : String(err);
    process.stderr.write(`flora-embed: ${msg}\n${USAGE}`);
    return 2;
  }
  try {
    const embedder = await resolveEmbedder(job.model);
    const stats = await embedAndMatch(job, embedder);
    process.stderr.write(
      `flora-embed: ${stats.rows} pairs (${stats.literals1} x ${stats.literals2} literals, ` +
        `model ${stats.model}, theta_s ${job.thetaS}, top_k ${job.topK}) -> ${job.out}\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof ModelLoadError) {
      process.stderr.write(`flora-embed: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err && typeof err.code === "string") {
      process.stderr.write(`flora-embed: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
