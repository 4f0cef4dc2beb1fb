/** Thin typed client for the paircompare service; all numbers come from the
 * server — the workbench never computes statistics on its own. */
import type {
  AggregateResponse,
  AnalysisReport,
  EffectSizeEstimate,
  GridResult,
  PowerCurve,
  ProspectiveRecord,
  SeedBundle,
  TestResult,
  UploadResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    public detail: string,
  ) {
    super(`${kind}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private base = '',
    private fetchFn: FetchLike = globalThis.fetch.bind(globalThis),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + path, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let kind = `http_${response.status}`;
      let detail = response.statusText;
      try {
        const payload = (await response.json()) as { error?: string; detail?: unknown };
        kind = payload.error ?? kind;
        detail = typeof payload.detail === 'string' ? payload.detail : JSON.stringify(payload.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, kind, detail);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/healthz');
  }

  upload(content: string, format: string, hasHeader: boolean, name: string): Promise<UploadResponse> {
    return this.request('POST', '/api/sessions', {
      content,
      format,
      has_header: hasHeader,
      name,
    });
  }

  aggregate(
    sessionId: string,
    body: { eu_size: number; aggregator: string; shuffle_seed: number | null },
  ): Promise<AggregateResponse> {
    return this.request('POST', `/api/sessions/${sessionId}/aggregate`, body);
  }

  analyze(sessionId: string, alpha1: number): Promise<AnalysisReport> {
    return this.request('POST', `/api/sessions/${sessionId}/analyze`, { alpha1 });
  }

  runTest(
    sessionId: string,
    body: {
      test_id: string;
      direction: string;
      delta: number;
      alpha2: number;
      trials: number;
      seed: number;
    },
  ): Promise<TestResult> {
    return this.request('POST', `/api/sessions/${sessionId}/test`, body);
  }

  effect(sessionId: string, indices: string[]): Promise<{ effect_sizes: EffectSizeEstimate[] }> {
    return this.request('POST', `/api/sessions/${sessionId}/effect`, { indices });
  }

  prospectivePower(
    sessionId: string,
    body: { mean_diff: number; std_dev: number; target_power: number; alpha: number; direction: string },
  ): Promise<ProspectiveRecord> {
    return this.request('POST', `/api/sessions/${sessionId}/power`, {
      method: 'prospective',
      ...body,
    });
  }

  retrospectivePower(
    sessionId: string,
    body: {
      method: 'mc' | 'bootstrap';
      test_id: string;
      alpha: number;
      direction: string;
      sample_sizes: number[] | null;
      trials: number;
      seed: number;
      mean_diff?: number;
      std_dev?: number;
    },
  ): Promise<PowerCurve> {
    return this.request('POST', `/api/sessions/${sessionId}/power`, body);
  }

  /** Raw canonical report text: byte-identical to the CLI's report.json. */
  async reportText(sessionId: string, masterSeed: number | null): Promise<string> {
    const query = masterSeed === null ? '' : `?master_seed=${masterSeed}`;
    const response = await this.fetchFn(`${this.base}/api/sessions/${sessionId}/report${query}`);
    if (!response.ok) {
      const payload = (await response.json()) as { error?: string; detail?: unknown };
      throw new ApiError(
        response.status,
        payload.error ?? `http_${response.status}`,
        typeof payload.detail === 'string' ? payload.detail : '',
      );
    }
    return response.text();
  }

  grid(body: {
    systems: Record<string, number[]>;
    test_id: string;
    direction: string;
    delta: number;
    alpha2: number;
    trials: number;
    seed: number;
  }): Promise<GridResult> {
    return this.request('POST', '/api/grid', body);
  }

  seeds(masterSeed: number): Promise<SeedBundle> {
    return this.request('GET', `/api/seeds?master_seed=${masterSeed}`);
  }
}
