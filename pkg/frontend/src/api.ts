// Typed client for the consultation session service. The fetch
// implementation is injectable so tests can run against a mock service.

export type Phase = 'running' | 'awaiting_scores' | 'finished' | 'aborted';

export interface CandidateDto {
  id: string;
  objectives: number[];
}

export interface PendingBatch {
  session_index: number;
  generation: number;
  candidates: CandidateDto[];
  population?: number[][];
}

export interface SessionSnapshot {
  id: string;
  phase: Phase;
  generation: number;
  generations: number;
  consultations: number;
  trajectory: (number | null)[];
  final_objectives?: number[][];
  failure?: string;
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(resp: Response): Promise<ApiError> {
  let code = 'unknown';
  let message = `request failed with status ${resp.status}`;
  try {
    const body = await resp.json();
    if (body && typeof body === 'object') {
      code = body.code ?? code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the defaults
  }
  return new ApiError(code, message, resp.status);
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      throw await parseError(resp);
    }
    return (await resp.json()) as T;
  }

  createSession(config: unknown): Promise<{ id: string; phase: Phase }> {
    return this.request('/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(config),
    });
  }

  getState(id: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${id}`);
  }

  async getPending(id: string): Promise<PendingBatch | null> {
    const body = await this.request<{ pending: PendingBatch | null }>(`/sessions/${id}/pending`);
    return body.pending;
  }

  async submitScores(id: string, scores: Record<string, number>): Promise<void> {
    await this.request(`/sessions/${id}/scores`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ scores }),
    });
  }

  async abort(id: string): Promise<void> {
    await this.request(`/sessions/${id}/abort`, { method: 'POST' });
  }
}
