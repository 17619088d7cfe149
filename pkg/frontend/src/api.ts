// Thin typed client for the orgatlas HTTP API.

import type {
  ApiError,
  BrowsePayload,
  EntityPayload,
  ExpertsPayload,
  RollupPayload,
  SearchPayload,
  TreePayload,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const url = new URL(this.baseUrl + path, this.baseUrl || undefined);
    for (const [key, value] of Object.entries(params ?? {})) {
      url.searchParams.set(key, value);
    }
    const response = await fetch(url.toString());
    const body = await response.json();
    if (!response.ok) {
      throw new ApiFailure(response.status, body as ApiError);
    }
    return body as T;
  }

  entity(id: string): Promise<EntityPayload> {
    return this.get(`/entities/${encodeURIComponent(id)}`);
  }

  browse(kind: string, filters: Record<string, string>): Promise<BrowsePayload> {
    return this.get(`/browse/${kind}`, filters);
  }

  search(q: string, offset = 0, limit = 50): Promise<SearchPayload> {
    return this.get("/search", { q, offset: String(offset), limit: String(limit) });
  }

  themeTree(): Promise<TreePayload> {
    return this.get("/themes/tree");
  }

  rollup(themeId: string): Promise<RollupPayload> {
    return this.get(`/themes/${encodeURIComponent(themeId)}/rollup`);
  }

  experts(q: string, k = 10): Promise<ExpertsPayload> {
    return this.get("/experts", { q, k: String(k) });
  }
}
