/** Typed fetch client for the pipeline service's JSON API. */

import type {
  ChatRequest,
  ChatResponse,
  FaceEntry,
  HealthResponse,
  SessionResponse,
} from "./types.js"

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`service error ${status}: ${detail}`)
  }
}

export interface ApiOptions {
  baseUrl: string
  /** injectable for tests; defaults to the global fetch */
  fetchImpl?: typeof fetch
}

export class ApiClient {
  private readonly baseUrl: string
  private readonly fetchImpl: typeof fetch

  constructor(options: ApiOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "")
    this.fetchImpl = options.fetchImpl ?? fetch
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response
    try {
      response = await this.fetchImpl(this.baseUrl + path, init)
    } catch (err) {
      throw new ApiError(0, err instanceof Error ? err.message : String(err))
    }
    if (!response.ok) {
      let detail = response.statusText
      try {
        const body = (await response.json()) as { detail?: string }
        if (body.detail) detail = body.detail
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail)
    }
    return (await response.json()) as T
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/health")
  }

  async faces(): Promise<FaceEntry[]> {
    const body = await this.request<{ faces: FaceEntry[] }>("/faces")
    return body.faces
  }

  createSession(faceId: string): Promise<SessionResponse> {
    return this.request<SessionResponse>("/session", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ face_id: faceId }),
    })
  }

  chat(request: ChatRequest): Promise<ChatResponse> {
    return this.request<ChatResponse>("/chat", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    })
  }
}
