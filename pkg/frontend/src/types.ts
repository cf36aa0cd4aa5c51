// Wire types mirroring the prediction service's JSON payloads.

export interface RoomConfigDraft {
  orientation: string;
  width: number;
  depth: number;
  reflectance: number;
  shading: string;
  sill_height: number;
  window_height: number;
  divisions: string;
}

export interface ChoiceVariable {
  name: string;
  kind: "choice";
  choices: string[];
  default: string;
}

export interface RangeVariable {
  name: string;
  kind: "range";
  min: number;
  max: number;
  default: number;
  unit: string;
}

export interface PairVariable {
  name: string;
  kind: "pair";
  fields: string[];
  choices: number[][];
  width_range: [number, number];
  depth_range: [number, number];
  default: number[];
  unit: string;
}

export type Variable = ChoiceVariable | RangeVariable | PairVariable;

export interface DesignSpaceResponse {
  variables: Variable[];
  fixed: Record<string, number>;
  metrics: string[];
}

export interface ViewExact {
  view_range: number;
  view_depth: number;
  view_factor: number;
}

export interface PredictResponse {
  prediction: Record<string, number>;
  view_exact: ViewExact;
  quality_views_pass: boolean;
}

export interface ExplainResponse {
  base: Record<string, number>;
  phi: Record<string, Record<string, number>>;
  prediction: Record<string, number>;
}

export interface ResultPair {
  prediction: PredictResponse;
  explanation: ExplainResponse;
}
