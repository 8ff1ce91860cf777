/** Wire types mirroring the trajecta HTTP API responses. */

export interface TypedWord {
  text: string;
  kind: "conjunction" | "temporal" | "spatial";
}

export interface WindowJson {
  start: number | null;
  end: number | null;
  daily: boolean;
}

export interface GroupConstraint {
  keywords: string[];
  order_index: number | null;
}

export interface ConstraintsEcho {
  sentence: string;
  words: TypedWord[];
  windows: WindowJson[];
  groups: GroupConstraint[];
  combinator: "and" | "or";
  alpha: number;
  beta: number;
  topic_weights: number[] | null;
  k: number;
}

export interface NeighborJson {
  word: string;
  sim: number;
}

export interface KeywordJson {
  word: string;
  neighbors: NeighborJson[];
}

export interface ScoredPoiJson {
  poi_id: string;
  name: string;
  category: string;
  station_id: string | null;
  lon: number;
  lat: number;
  score: number;
  keyword_hits: Array<[string, number]>;
}

export interface GroupJson {
  keywords: KeywordJson[];
  order_index: number | null;
  pois: ScoredPoiJson[];
}

export interface PointJson {
  station_id: string;
  lon: number;
  lat: number;
  timestamp: number;
  time_word: string;
  topics: number[];
}

export interface TrajectoryJson {
  id: string;
  relevance: number;
  matched: Array<Array<[number, string, number]>>;
  points: PointJson[];
}

export interface QueryResponse {
  constraints: ConstraintsEcho;
  groups: GroupJson[];
  trajectories: TrajectoryJson[];
  total_results: number;
  timing_ms: number;
}

export interface QueryRequest {
  sentence: string;
  alpha?: number;
  beta?: number;
  topic_weights?: number[];
  k?: number;
  word_overrides?: Record<string, string>;
  max_results?: number;
}

export interface TopicJson {
  index: number;
  label: string;
  top_words: Array<{ word: string; p: number }>;
}
