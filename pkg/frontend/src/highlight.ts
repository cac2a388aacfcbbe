// Overlay geometry: map a matched rule or row onto pixel rectangles using
// the panel frames the service ships with the layout. The SVG itself is
// never mutated; highlights are absolutely-positioned boxes above it.

import type { LayoutJson, ReadTraceJson, RuleJson, RulesJson } from './types.js';

export interface HighlightRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

function sameRule(a: RuleJson, b: RuleJson): boolean {
  return (
    a.polarity === b.polarity &&
    a.assignments.length === b.assignments.length &&
    a.assignments.every(([f, v], i) => b.assignments[i]![0] === f && b.assignments[i]![1] === v)
  );
}

/** The column of the matched rule in its (positive or negative) tile panel. */
export function ruleHighlight(layout: LayoutJson, rules: RulesJson, matched: RuleJson): HighlightRect {
  const panelRules = matched.polarity === 'positive' ? rules.positive : rules.negative;
  const column = panelRules.findIndex((r) => sameRule(r, matched));
  if (column < 0) {
    throw new Error('matched rule is not part of the rule list');
  }
  const role = matched.polarity === 'positive' ? 'positive_tile' : 'negative_tile';
  const frame = layout.frames.find((f) => f.role === role);
  if (!frame || frame.col_width === null) {
    throw new Error(`layout has no tile panel for role ${role}`);
  }
  return {
    x: frame.x + column * frame.col_width,
    y: frame.y,
    width: frame.col_width,
    height: frame.height,
  };
}

/** The matched combination's row band, one rectangle per panel. */
export function rowHighlight(layout: LayoutJson, matchedRow: number): HighlightRect[] {
  if (!layout.row_map) {
    throw new Error('layout carries no row map');
  }
  const row = layout.row_map[matchedRow];
  if (row === undefined) {
    throw new Error(`row ${matchedRow} is outside the layout's row map`);
  }
  return layout.frames.map((frame) => ({
    x: frame.x,
    y: frame.y + row * frame.row_height,
    width: frame.width,
    height: frame.row_height,
  }));
}

/** Dispatch on what the trace matched. */
export function highlightsForTrace(
  layout: LayoutJson,
  rules: RulesJson | null,
  trace: ReadTraceJson,
): HighlightRect[] {
  if (trace.matched_rule && rules) {
    return [ruleHighlight(layout, rules, trace.matched_rule)];
  }
  if (trace.matched_row !== null) {
    return rowHighlight(layout, trace.matched_row);
  }
  throw new Error('trace matched neither a rule nor a row');
}
