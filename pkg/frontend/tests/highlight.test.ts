import { describe, expect, it } from 'vitest';

import { highlightsForTrace, rowHighlight, ruleHighlight } from '../src/highlight.js';
import type { NomogramResponse, ReadTraceJson } from '../src/types.js';

import { fixture } from './helpers.js';

const type1 = fixture<NomogramResponse>('nomogram_type1.json');
const type4 = fixture<NomogramResponse>('nomogram_type4.json');
const tracePos = fixture<ReadTraceJson>('read_a1_b0.json');
const tracePos2 = fixture<ReadTraceJson>('read_a0_b1.json');
const traceNeg = fixture<ReadTraceJson>('read_a0_b0.json');
const traceMixed = fixture<ReadTraceJson>('read_mixed.json');

describe('ruleHighlight', () => {
  it('targets the first positive column for the hand-trace sample', () => {
    const rect = ruleHighlight(type1.layout, type1.rules!, tracePos.matched_rule!);
    const frame = type1.layout.frames.find((f) => f.role === 'positive_tile')!;
    expect(rect.x).toBe(frame.x); // column 0
    expect(rect.width).toBe(frame.col_width);
    expect(rect.height).toBe(frame.height);
  });

  it('moves when the matched rule changes but stays in the positive panel', () => {
    const first = ruleHighlight(type1.layout, type1.rules!, tracePos.matched_rule!);
    const second = ruleHighlight(type1.layout, type1.rules!, tracePos2.matched_rule!);
    expect(second.x).not.toBe(first.x);
    const frame = type1.layout.frames.find((f) => f.role === 'positive_tile')!;
    expect(second.x).toBeGreaterThanOrEqual(frame.x);
    expect(second.x + second.width).toBeLessThanOrEqual(frame.x + frame.width + 1e-6);
  });

  it('targets the negative panel for a negative match', () => {
    const rect = ruleHighlight(type1.layout, type1.rules!, traceNeg.matched_rule!);
    const frame = type1.layout.frames.find((f) => f.role === 'negative_tile')!;
    expect(rect.x).toBeGreaterThanOrEqual(frame.x);
  });

  it('every rule in the list has a resolvable target', () => {
    for (const rule of [...type1.rules!.positive, ...type1.rules!.negative]) {
      expect(() => ruleHighlight(type1.layout, type1.rules!, rule)).not.toThrow();
    }
  });
});

describe('rowHighlight', () => {
  it('spans every panel at the same display row', () => {
    const rects = rowHighlight(type4.layout, traceMixed.matched_row!);
    expect(rects.length).toBe(type4.layout.frames.length);
    const displayRow = type4.layout.row_map![traceMixed.matched_row!]!;
    for (const [i, rect] of rects.entries()) {
      const frame = type4.layout.frames[i]!;
      expect(rect.y).toBeCloseTo(frame.y + displayRow * frame.row_height, 6);
      expect(rect.height).toBe(frame.row_height);
      expect(rect.width).toBe(frame.width);
    }
  });

  it('every combination row resolves to an on-chart band', () => {
    for (let row = 0; row < type4.layout.row_map!.length; row += 1) {
      const rects = rowHighlight(type4.layout, row);
      for (const rect of rects) {
        expect(rect.y).toBeGreaterThanOrEqual(type4.layout.frames[0]!.y);
        expect(rect.y + rect.height).toBeLessThanOrEqual(
          type4.layout.frames[0]!.y + type4.layout.frames[0]!.height + 1e-6,
        );
      }
    }
  });
});

describe('highlightsForTrace', () => {
  it('dispatches rule traces to the rule highlighter', () => {
    const rects = highlightsForTrace(type1.layout, type1.rules, tracePos);
    expect(rects.length).toBe(1);
  });

  it('dispatches row traces to the row highlighter', () => {
    const rects = highlightsForTrace(type4.layout, type4.rules, traceMixed);
    expect(rects.length).toBe(3);
  });
});
