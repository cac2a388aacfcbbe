// Thin client for the two service endpoints. The UI never computes a
// prediction itself: everything it displays comes out of these calls.

import type { FindingJson, NomogramResponse, ReadContextJson, ReadTraceJson, Sample } from './types.js';

export type OutputMode = 'rules' | 'prob' | 'estimate';

export interface UploadBundle {
  features: File;
  outputs: File;
  manifest: File;
  shap?: File | null;
  mode: OutputMode;
  threshold: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly messages: string[],
    readonly findings: FindingJson[] = [],
  ) {
    super(messages.join('; ') || `request failed with status ${status}`);
  }
}

async function errorFromResponse(response: Response): Promise<ApiError> {
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  if (body && typeof body === 'object') {
    const record = body as Record<string, unknown>;
    if (Array.isArray(record.limit_violations)) {
      return new ApiError(response.status, record.limit_violations as string[]);
    }
    if (Array.isArray(record.findings)) {
      const findings = record.findings as FindingJson[];
      return new ApiError(
        response.status,
        findings.map((f) => `${f.code}: ${f.message}`),
        findings,
      );
    }
    if (typeof record.message === 'string') {
      return new ApiError(response.status, [record.message]);
    }
  }
  return new ApiError(response.status, [`request failed with status ${response.status}`]);
}

export class ApiClient {
  constructor(
    private readonly fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
    private readonly base = '',
  ) {}

  async createNomogram(bundle: UploadBundle, signal?: AbortSignal): Promise<NomogramResponse> {
    const form = new FormData();
    form.append('features', bundle.features);
    form.append('outputs', bundle.outputs);
    form.append('manifest', bundle.manifest);
    if (bundle.shap) {
      form.append('shap', bundle.shap);
    }
    form.append('prob', bundle.mode === 'prob' ? 'true' : 'false');
    form.append('estimate', bundle.mode === 'estimate' ? 'true' : 'false');
    form.append('threshold', String(bundle.threshold));
    const response = await this.fetchFn(`${this.base}/api/v1/nomogram`, {
      method: 'POST',
      body: form,
      signal,
    });
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as NomogramResponse;
  }

  async read(context: ReadContextJson, sample: Sample, signal?: AbortSignal): Promise<ReadTraceJson> {
    const response = await this.fetchFn(`${this.base}/api/v1/read`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ read_context: context, sample }),
      signal,
    });
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as ReadTraceJson;
  }
}
