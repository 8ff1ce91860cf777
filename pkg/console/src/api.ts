import type { QueryRequest, QueryResponse, TopicJson } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the trajecta HTTP API. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async query(request: QueryRequest): Promise<QueryResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      const body = await response.json().catch(() => ({ error: "Unknown" }));
      throw new Error(`${(body as { error?: string }).error ?? response.status}`);
    }
    return (await response.json()) as QueryResponse;
  }

  async topics(): Promise<TopicJson[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/topics`);
    if (!response.ok) throw new Error(`topics failed: ${response.status}`);
    return ((await response.json()) as { topics: TopicJson[] }).topics;
  }

  async health(): Promise<{ status: string; partitions: number }> {
    const response = await this.fetchImpl(`${this.baseUrl}/health`);
    return (await response.json()) as { status: string; partitions: number };
  }
}
