// Thin fetch client. Nothing in here transforms domain values; it only moves
// payloads and streams chunk lines into a ChunkAssembler.
import { ChunkAssembler } from "./chunks";
import type {
  CompareResponse, DocsResponse, HeaDoc, JobDoc, MachineDetail,
  MachineSummary, SeriesResponse,
} from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let code = "http-error";
    let message = response.statusText;
    try {
      const body = await response.json();
      code = body?.error?.code ?? code;
      message = body?.error?.message ?? message;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  machines(): Promise<MachineSummary[]> {
    return request(`${this.base}/machines`);
  }

  machine(name: string, at?: string): Promise<MachineDetail> {
    const suffix = at ? `?at=${encodeURIComponent(at)}` : "";
    return request(`${this.base}/machines/${encodeURIComponent(name)}${suffix}`);
  }

  series(name: string, selector: string): Promise<SeriesResponse> {
    return request(
      `${this.base}/machines/${encodeURIComponent(name)}/series?selector=${encodeURIComponent(selector)}`,
    );
  }

  docs(term: string): Promise<DocsResponse> {
    return request(`${this.base}/docs/${encodeURIComponent(term)}`);
  }

  compare(qasm: string, machine: string, optionsList: object[]): Promise<CompareResponse> {
    return request(`${this.base}/transpile/compare`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ qasm, machine, options_list: optionsList }),
    });
  }

  jobs(): Promise<{ job_id: string }[]> {
    return request(`${this.base}/jobs`);
  }

  job(jobId: string): Promise<JobDoc> {
    return request(`${this.base}/jobs/${encodeURIComponent(jobId)}`);
  }

  hea(jobId: string, trials: number, seed: number): Promise<HeaDoc> {
    return request(`${this.base}/results/hea`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ job_id: jobId, trials, seed }),
    });
  }

  decode<T>(jobId: string, decoder: string, extra: object = {}): Promise<T> {
    return request(`${this.base}/results/decode`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ job_id: jobId, decoder, ...extra }),
    });
  }

  /** Stream the counts chunks into an assembler, reporting progress. A broken
   * stream can be resumed: already-seen chunk indices are skipped on retry. */
  async streamCounts(
    jobId: string,
    assembler: ChunkAssembler,
    onProgress?: (received: number, expected: number | null) => void,
    retries = 2,
  ): Promise<void> {
    for (let attempt = 0; ; attempt++) {
      try {
        const response = await fetch(`${this.base}/jobs/${encodeURIComponent(jobId)}/counts`);
        if (!response.ok || !response.body) {
          throw new ApiError(response.status, "stream", response.statusText);
        }
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          let newline;
          while ((newline = buffer.indexOf("\n")) >= 0) {
            const line = buffer.slice(0, newline).trim();
            buffer = buffer.slice(newline + 1);
            if (!line) continue;
            const record = JSON.parse(line);
            if (!assembler.has(record.index)) assembler.add(record);
            onProgress?.(assembler.received, assembler.expected);
          }
        }
        if (assembler.complete) return;
        throw new Error(`stream ended with chunks missing: ${assembler.missing().slice(0, 4)}`);
      } catch (err) {
        if (attempt >= retries) throw err;
      }
    }
  }
}
