// Session state: one nomogram at a time, at most one request in flight.

import type { NomogramResponse, Sample, SampleValue } from './types.js';

export type Phase = 'idle' | 'loading' | 'ready' | 'failed';

export class SessionState {
  phase: Phase = 'idle';
  response: NomogramResponse | null = null;
  errors: string[] = [];
  sample: Sample = {};
  private controller: AbortController | null = null;

  /** A new submission cancels the previous in-flight request. */
  beginSubmit(): AbortSignal {
    this.controller?.abort();
    this.controller = new AbortController();
    this.phase = 'loading';
    this.errors = [];
    return this.controller.signal;
  }

  completeSubmit(response: NomogramResponse): void {
    this.response = response;
    this.phase = 'ready';
    this.errors = [];
    this.sample = {};
  }

  failSubmit(errors: string[]): void {
    this.response = null;
    this.phase = 'failed';
    this.errors = errors;
  }

  /** What-if reading opens only after a successful nomogram response. */
  get whatIfEnabled(): boolean {
    return this.phase === 'ready' && this.response !== null;
  }

  setAssignment(feature: string, value: SampleValue): void {
    this.sample = { ...this.sample, [feature]: value };
  }

  sampleComplete(): boolean {
    if (!this.response) return false;
    return this.response.read_context.space.features.every(
      (f) => this.sample[f.name] !== undefined && this.sample[f.name] !== '',
    );
  }
}
