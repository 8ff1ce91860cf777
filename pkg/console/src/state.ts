import type { ApiClient } from "./api.js";
import type { QueryRequest, QueryResponse } from "./types.js";

export interface ConsoleState {
  sentence: string;
  wordOverrides: Record<string, string>;
  alpha: number;
  beta: number;
  topicWeights: number[];
  k: number;
  maxResults: number;
  selected: Set<string>; // trajectory ids checked in the result list
  brush: [number, number] | null; // epoch-second range from the temporal view
  response: QueryResponse | null;
  error: string | null;
  inFlight: boolean;
}

export function initialState(topicCount: number): ConsoleState {
  return {
    sentence: "",
    wordOverrides: {},
    alpha: 1.0,
    beta: 0.0,
    topicWeights: new Array(topicCount).fill(0),
    k: 10,
    maxResults: 50,
    selected: new Set(),
    brush: null,
    response: null,
    error: null,
    inFlight: false,
  };
}

export function buildRequest(state: ConsoleState): QueryRequest {
  const request: QueryRequest = {
    sentence: state.sentence,
    alpha: state.alpha,
    beta: state.beta,
    k: state.k,
    max_results: state.maxResults,
  };
  if (state.topicWeights.some((w) => w !== 0)) {
    request.topic_weights = [...state.topicWeights];
  }
  if (Object.keys(state.wordOverrides).length > 0) {
    request.word_overrides = { ...state.wordOverrides };
  }
  return request;
}

/**
 * Serializes queries: every explicit user action issues exactly one
 * request, and a stale response (superseded by a newer request) is
 * dropped by sequence number instead of flashing old results.
 */
export class QueryCoordinator {
  private seq = 0;
  requestCount = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly onUpdate: (state: ConsoleState) => void,
  ) {}

  async run(state: ConsoleState): Promise<ConsoleState> {
    const mySeq = ++this.seq;
    this.requestCount += 1;
    state.inFlight = true;
    state.error = null;
    this.onUpdate(state);
    try {
      const response = await this.api.query(buildRequest(state));
      if (mySeq !== this.seq) return state; // superseded; drop silently
      state.response = response;
      // keep only selections that still exist in the new result list
      const ids = new Set(response.trajectories.map((t) => t.id));
      state.selected = new Set([...state.selected].filter((id) => ids.has(id)));
      state.brush = null;
    } catch (err) {
      if (mySeq !== this.seq) return state;
      state.response = null;
      state.error = err instanceof Error ? err.message : String(err);
    } finally {
      if (mySeq === this.seq) {
        state.inFlight = false;
        this.onUpdate(state);
      }
    }
    return state;
  }
}

/** Trajectory ids in server order: the console never re-ranks. */
export function resultOrder(response: QueryResponse): string[] {
  return response.trajectories.map((t) => t.id);
}

export function toggleSelection(state: ConsoleState, id: string): void {
  if (state.selected.has(id)) {
    state.selected.delete(id);
  } else {
    state.selected.add(id);
  }
}
