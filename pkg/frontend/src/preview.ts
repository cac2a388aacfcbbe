// Client-side CSV peek: the first rows only, for a sanity check before
// upload. Full parsing and validation stay server-side.

export interface CsvPreview {
  header: string[];
  rows: string[][];
  totalRows: number;
  truncated: boolean;
}

export const PREVIEW_ROW_LIMIT = 20;

export function previewCsv(text: string, limit: number = PREVIEW_ROW_LIMIT): CsvPreview {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  const header = (lines[0] ?? '').split(',');
  const body = lines.slice(1);
  return {
    header,
    rows: body.slice(0, limit).map((line) => line.split(',')),
    totalRows: body.length,
    truncated: body.length > limit,
  };
}
