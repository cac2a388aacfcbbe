import { describe, expect, it } from 'vitest';

import { previewCsv } from '../src/preview.js';

describe('previewCsv', () => {
  it('parses header and rows', () => {
    const p = previewCsv('A,B\n0,0\n0,1\n');
    expect(p.header).toEqual(['A', 'B']);
    expect(p.rows).toEqual([
      ['0', '0'],
      ['0', '1'],
    ]);
    expect(p.truncated).toBe(false);
  });

  it('caps the preview at 20 rows', () => {
    const lines = ['x', ...Array.from({ length: 50 }, (_, i) => String(i))];
    const p = previewCsv(lines.join('\n'));
    expect(p.rows.length).toBe(20);
    expect(p.totalRows).toBe(50);
    expect(p.truncated).toBe(true);
  });

  it('handles CRLF and trailing newlines', () => {
    const p = previewCsv('A,B\r\n0,1\r\n');
    expect(p.rows).toEqual([['0', '1']]);
  });
});
