// Shared test plumbing: captured service responses and a routing fetch mock.

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { vi } from 'vitest';

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');

export function fixture<T = any>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), 'utf-8')) as T;
}

export interface RouteSpec {
  nomogram?: { status: number; body: unknown };
  read?: (sample: Record<string, unknown>) => { status: number; body: unknown };
}

/** A fetch double that routes the two API paths to canned responses. */
export function routedFetch(routes: RouteSpec) {
  return vi.fn(async (url: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const path = String(url);
    if (path.endsWith('/api/v1/nomogram') && routes.nomogram) {
      const { status, body } = routes.nomogram;
      return jsonResponse(status, body);
    }
    if (path.endsWith('/api/v1/read') && routes.read) {
      const payload = JSON.parse(String(init?.body)) as { sample: Record<string, unknown> };
      const { status, body } = routes.read(payload.sample);
      return jsonResponse(status, body);
    }
    throw new Error(`unrouted request: ${path}`);
  }) as unknown as typeof fetch;
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export function csvFile(name: string, content: string): File {
  return new File([content], name, { type: 'text/csv' });
}

export const CATBIN = {
  features: 'A,B\n0,0\n0,1\n1,0\n1,1\n',
  outputs: 'output\n0.2\n0.7\n0.8\n0.9\n',
  manifest: 'feature,category\nA,0\nA,1\nB,0\nB,1\n',
};
