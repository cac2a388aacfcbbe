// Shapes of the service's documented JSON responses.

export interface FeatureJson {
  name: string;
  kind: 'categorical' | 'numeric';
  levels?: [string, string];
  min?: number;
  max?: number;
  step?: number;
}

export interface SpaceJson {
  features: FeatureJson[];
}

export interface RuleJson {
  assignments: [string, string][];
  polarity: 'positive' | 'negative';
  iteration: number;
}

export interface RankingJson {
  entries: { feature: string; score: number }[];
  warnings: string[];
}

export interface RulesJson {
  threshold: number;
  ranking: RankingJson;
  positive: RuleJson[];
  negative: RuleJson[];
}

export interface PanelFrameJson {
  role: string;
  x: number;
  y: number;
  width: number;
  height: number;
  row_height: number;
  n_cols: number;
  col_width: number | null;
  x_domain: [number, number];
}

export interface PanelJson {
  role: string;
  title: string;
  x_label: string;
  x_domain: [number, number];
  n_cols: number;
  x_ticks: [number, string][];
  y_ticks: [number, string][];
  elements: Record<string, unknown>[];
}

export interface LayoutJson {
  kind: number;
  title: string;
  panels: PanelJson[];
  n_rows: number;
  legend: [string, string][];
  row_map: number[] | null;
  width: number;
  height: number;
  frames: PanelFrameJson[];
}

export interface ReadContextJson {
  space: SpaceJson;
  rules: RulesJson | null;
  table: {
    rows: (string | number)[][];
    outputs: { kind: string; values: number[] };
  } | null;
  threshold: number;
}

export interface NomogramResponse {
  kind: number;
  svg: string;
  layout: LayoutJson;
  rules: RulesJson | null;
  ranking: RankingJson;
  read_context: ReadContextJson;
}

export interface TraceStepJson {
  description: string;
  focus_kind: 'predictor' | 'iteration' | 'row';
  focus: string | number;
}

export interface ReadTraceJson {
  steps: TraceStepJson[];
  matched_rule: RuleJson | null;
  matched_row: number | null;
  polarity: 'positive' | 'negative' | null;
  output: number | null;
}

export interface FindingJson {
  code: string;
  message: string;
  rows: number[];
  columns: string[];
}

export type SampleValue = string | number;
export type Sample = Record<string, SampleValue>;
