/**
 * Typed client for the search service API.
 *
 * Every identifier used for evaluation (query_id, doc_id, position) comes
 * from a prior search response and is passed back verbatim; the UI never
 * fabricates them.
 */

export interface SectionFlags {
  folder: boolean;
  name: boolean;
  body: boolean;
}

export interface SearchResultRow {
  doc_id: number;
  folder: string;
  name: string;
  position: number;
  score: number;
}

export interface SearchResponse {
  query_id: number;
  eligible_for_evaluation: boolean;
  results: SearchResultRow[];
}

export interface EvaluationContext {
  query_id: number | null;
  position: number | null;
  can_evaluate: boolean;
}

export interface DocumentResponse {
  doc_id: number;
  folder: string;
  name: string;
  body: string;
  evaluation_context: EvaluationContext;
}

export interface UpdatedWord {
  word: string;
  old_weight: number;
  new_weight: number;
}

export interface EvaluateResponse {
  evaluation_id: number;
  updated_words: UpdatedWord[];
  p_before: number;
  p_after: number;
  delta: number;
}

export interface ReportRow {
  evaluation_id: number;
  p_before: number;
  delta: number;
}

export interface ReportResponse {
  rows: ReportRow[];
  aggregate: {
    total_delta: number;
    count: number;
    mean_improvement: number;
  };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  const payload = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof payload === "object" && payload !== null && "detail" in payload
        ? String((payload as { detail: unknown }).detail)
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, detail);
  }
  return payload as T;
}

export class ApiClient {
  constructor(private readonly base = "") {}

  search(q: string, sections: SectionFlags, user: string): Promise<SearchResponse> {
    return request<SearchResponse>(`${this.base}/api/search`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ q, sections, user }),
    });
  }

  document(docId: number, queryId?: number, position?: number): Promise<DocumentResponse> {
    const params = new URLSearchParams();
    if (queryId !== undefined) params.set("query_id", String(queryId));
    if (position !== undefined) params.set("position", String(position));
    const suffix = params.size > 0 ? `?${params}` : "";
    return request<DocumentResponse>(`${this.base}/api/doc/${docId}${suffix}`);
  }

  evaluate(queryId: number, docId: number, position: number, user: string): Promise<EvaluateResponse> {
    return request<EvaluateResponse>(`${this.base}/api/evaluate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query_id: queryId, doc_id: docId, position, user }),
    });
  }

  report(): Promise<ReportResponse> {
    return request<ReportResponse>(`${this.base}/api/report`);
  }
}
