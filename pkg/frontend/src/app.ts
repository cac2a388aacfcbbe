// DOM wiring for the single-page UI: upload form on the left, rendered
// nomogram with a highlight overlay on the right, what-if panel below.

import { ApiClient, ApiError, type OutputMode, type UploadBundle } from './api.js';
import { highlightsForTrace } from './highlight.js';
import { previewCsv } from './preview.js';
import { SessionState } from './state.js';
import type { FeatureJson, ReadTraceJson, SampleValue } from './types.js';

export const CLIENT_BYTE_CAP = 10 * 1024 * 1024;

function el<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const found = root.querySelector(selector);
  if (!found) {
    throw new Error(`missing element ${selector}`);
  }
  return found as T;
}

export class App {
  readonly state = new SessionState();
  private readonly doc: Document;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient = new ApiClient(),
  ) {
    this.doc = root.ownerDocument;
    this.wireForm();
  }

  private wireForm(): void {
    const form = el<HTMLFormElement>(this.root, '#upload-form');
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      const bundle = this.collectBundle();
      if (bundle) {
        void this.submitBundle(bundle);
      }
    });
    for (const name of ['features', 'outputs', 'manifest', 'shap']) {
      const input = el<HTMLInputElement>(this.root, `#file-${name}`);
      input.addEventListener('change', () => void this.renderPreview(name, input));
    }
    el<HTMLButtonElement>(this.root, '#read-button').addEventListener('click', (event) => {
      event.preventDefault();
      void this.readSample();
    });
  }

  private collectBundle(): UploadBundle | null {
    const file = (name: string): File | null =>
      el<HTMLInputElement>(this.root, `#file-${name}`).files?.[0] ?? null;
    const features = file('features');
    const outputs = file('outputs');
    const manifest = file('manifest');
    const missing = [
      ...(features ? [] : ['features']),
      ...(outputs ? [] : ['outputs']),
      ...(manifest ? [] : ['manifest']),
    ];
    if (missing.length > 0) {
      this.showFormErrors(missing.map((m) => `${m}: file is required`));
      return null;
    }
    const mode = (this.root.querySelector('input[name="mode"]:checked') as HTMLInputElement | null)
      ?.value as OutputMode | undefined;
    const threshold = Number(el<HTMLInputElement>(this.root, '#threshold').value || '0.5');
    return {
      features: features!,
      outputs: outputs!,
      manifest: manifest!,
      shap: file('shap'),
      mode: mode ?? 'rules',
      threshold,
    };
  }

  async submitBundle(bundle: UploadBundle): Promise<void> {
    const totalBytes =
      bundle.features.size + bundle.outputs.size + bundle.manifest.size + (bundle.shap?.size ?? 0);
    if (totalBytes > CLIENT_BYTE_CAP) {
      this.showFormErrors([`upload is ${totalBytes} bytes; the service caps requests at ${CLIENT_BYTE_CAP}`]);
      return;
    }
    const signal = this.state.beginSubmit();
    this.setStatus('building nomogram…');
    try {
      const response = await this.api.createNomogram(bundle, signal);
      this.state.completeSubmit(response);
      this.renderNomogram();
    } catch (error) {
      if (error instanceof DOMException && error.name === 'AbortError') {
        return; // superseded by a newer submission
      }
      const messages =
        error instanceof ApiError ? error.messages : [`network failure: ${String(error)} — retry`];
      this.state.failSubmit(messages);
      this.showFormErrors(messages);
      this.setStatus('');
    }
  }

  private renderNomogram(): void {
    const response = this.state.response!;
    this.setStatus('');
    this.showFormErrors([]);
    const host = el<HTMLElement>(this.root, '#svg-host');
    host.innerHTML = response.svg;
    el<HTMLElement>(this.root, '#overlay').innerHTML = '';
    el<HTMLElement>(this.root, '#result').hidden = false;
    el<HTMLElement>(this.root, '#read-result').textContent = '';
    this.buildWhatIfForm();
    el<HTMLElement>(this.root, '#whatif').hidden = !this.state.whatIfEnabled;
  }

  private buildWhatIfForm(): void {
    const container = el<HTMLElement>(this.root, '#whatif-fields');
    container.innerHTML = '';
    const features = this.state.response!.read_context.space.features;
    for (const feature of features) {
      container.appendChild(this.fieldFor(feature));
    }
  }

  private fieldFor(feature: FeatureJson): HTMLElement {
    const wrap = this.doc.createElement('label');
    wrap.className = 'whatif-field';
    wrap.textContent = feature.name;
    let input: HTMLSelectElement | HTMLInputElement;
    if (feature.kind === 'categorical') {
      input = this.doc.createElement('select');
      const blank = this.doc.createElement('option');
      blank.value = '';
      blank.textContent = '—';
      input.appendChild(blank);
      for (const level of feature.levels ?? []) {
        const option = this.doc.createElement('option');
        option.value = level;
        option.textContent = level;
        input.appendChild(option);
      }
    } else {
      input = this.doc.createElement('input');
      input.type = 'number';
      input.min = String(feature.min);
      input.max = String(feature.max);
      input.step = String(feature.step);
    }
    input.dataset.feature = feature.name;
    input.addEventListener('change', () => {
      const value: SampleValue =
        feature.kind === 'numeric' && input.value !== '' ? Number(input.value) : input.value;
      this.state.setAssignment(feature.name, value);
    });
    wrap.appendChild(input);
    return wrap;
  }

  async readSample(): Promise<void> {
    if (!this.state.whatIfEnabled) {
      return;
    }
    const resultBox = el<HTMLElement>(this.root, '#read-result');
    if (!this.state.sampleComplete()) {
      resultBox.textContent = 'assign a value to every predictor first';
      return;
    }
    const response = this.state.response!;
    try {
      const trace = await this.api.read(response.read_context, this.state.sample);
      this.renderTrace(trace);
    } catch (error) {
      resultBox.textContent = error instanceof ApiError ? error.messages.join('; ') : String(error);
      el<HTMLElement>(this.root, '#overlay').innerHTML = '';
    }
  }

  private renderTrace(trace: ReadTraceJson): void {
    const response = this.state.response!;
    const resultBox = el<HTMLElement>(this.root, '#read-result');
    const result =
      trace.polarity !== null ? `prediction: ${trace.polarity}` : `output: ${trace.output}`;
    const steps = trace.steps.map((s) => `<li>${s.description}</li>`).join('');
    resultBox.innerHTML = `<p class="read-verdict">${result}</p><ol>${steps}</ol>`;

    const overlay = el<HTMLElement>(this.root, '#overlay');
    overlay.innerHTML = '';
    for (const rect of highlightsForTrace(response.layout, response.rules, trace)) {
      const box = this.doc.createElement('div');
      box.className = 'highlight';
      box.style.left = `${rect.x}px`;
      box.style.top = `${rect.y}px`;
      box.style.width = `${rect.width}px`;
      box.style.height = `${rect.height}px`;
      overlay.appendChild(box);
    }
  }

  private async renderPreview(name: string, input: HTMLInputElement): Promise<void> {
    const target = el<HTMLElement>(this.root, `#preview-${name}`);
    const file = input.files?.[0];
    if (!file) {
      target.innerHTML = '';
      return;
    }
    const preview = previewCsv(await file.text());
    const head = preview.header.map((h) => `<th>${h}</th>`).join('');
    const body = preview.rows
      .map((row) => `<tr>${row.map((c) => `<td>${c}</td>`).join('')}</tr>`)
      .join('');
    const note = preview.truncated
      ? `<p class="preview-note">showing ${preview.rows.length} of ${preview.totalRows} rows</p>`
      : '';
    target.innerHTML = `<table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>${note}`;
  }

  private showFormErrors(messages: string[]): void {
    const box = el<HTMLElement>(this.root, '#form-errors');
    box.innerHTML = messages.map((m) => `<p class="error">${m}</p>`).join('');
    box.hidden = messages.length === 0;
  }

  private setStatus(text: string): void {
    el<HTMLElement>(this.root, '#status').textContent = text;
  }
}

export function mount(root: HTMLElement, api?: ApiClient): App {
  return new App(root, api);
}
