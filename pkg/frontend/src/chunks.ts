// Client side of the chunked counts protocol: incremental assembly with
// duplicate rejection and index-based resume after a dropped stream.
import type { ChunkRecord } from "./types";

export interface AssembledCounts {
  entries: Record<string, number>;
  shots: number;
  width: number;
}

export class ChunkAssembler {
  private seen = new Set<number>();
  private merged: Record<string, number> = {};
  private total: number | null = null;
  private jobId: string | null = null;

  add(record: ChunkRecord): void {
    if (this.jobId === null) this.jobId = record.job_id;
    else if (record.job_id !== this.jobId)
      throw new Error(`chunk stream mixes jobs ${this.jobId} and ${record.job_id}`);
    if (this.total === null) this.total = record.total;
    else if (record.total !== this.total)
      throw new Error("chunk stream disagrees about the total chunk count");
    if (this.seen.has(record.index)) throw new Error(`duplicate chunk ${record.index}`);
    if (record.index < 0 || record.index >= this.total)
      throw new Error(`chunk index ${record.index} out of range`);
    this.seen.add(record.index);
    for (const [key, value] of Object.entries(record.entries)) {
      if (key in this.merged) throw new Error(`state ${key} appears twice`);
      this.merged[key] = value;
    }
  }

  addLine(line: string): void {
    this.add(JSON.parse(line) as ChunkRecord);
  }

  get received(): number {
    return this.seen.size;
  }

  get expected(): number | null {
    return this.total;
  }

  get complete(): boolean {
    return this.total !== null && this.seen.size === this.total;
  }

  /** Chunk indices still outstanding — the retry set after a stream drop. */
  missing(): number[] {
    if (this.total === null) return [];
    const gaps: number[] = [];
    for (let i = 0; i < this.total; i++) if (!this.seen.has(i)) gaps.push(i);
    return gaps;
  }

  has(index: number): boolean {
    return this.seen.has(index);
  }

  counts(): AssembledCounts {
    if (!this.complete) throw new Error(`missing chunks: ${this.missing().slice(0, 8)}`);
    let shots = 0;
    let width = 0;
    for (const [key, value] of Object.entries(this.merged)) {
      shots += value;
      width = key.length;
    }
    return { entries: this.merged, shots, width };
  }
}

/** Split NDJSON text into chunk records (used on fixture files and streams). */
export function parseChunkLines(text: string): ChunkRecord[] {
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as ChunkRecord);
}
