/** Payload shapes of the pipeline service's JSON API, plus UI state types. */

export interface HealthResponse {
  status: string
  checkpoints: Record<string, string>
  image_size: number
  seed: number
}

export interface FaceEntry {
  face_id: string
  png: string // base64 PNG
}

export interface SessionResponse {
  session_id: string
  face_id: string
  base_face_png: string
}

export interface ChatRequest {
  session_id: string
  text: string
  emotion_override?: string
}

export interface ChatResponse {
  text: string
  emotion: string
  au_target: Record<string, number>
  face_png: string
  latency_ms: Record<string, number>
}

export const EMOTIONS = [
  "anger", "disgust", "fear", "happiness",
  "sadness", "surprise", "neutral", "non_neutral",
] as const

export type EmotionName = (typeof EMOTIONS)[number]

export type EntryStatus = "pending" | "ok" | "failed"

export interface TranscriptEntry {
  id: number
  author: "user" | "agent"
  text: string
  status: EntryStatus
  timestamp: number
  /** agent entries always carry these once the reply lands */
  emotion?: string
  auTarget?: Record<string, number>
  facePng?: string
}

export interface UiSessionState {
  sessionId: string | null
  faceId: string | null
  baseFacePng: string | null
  /** at most one in-flight chat request per session */
  pending: boolean
  /** null means automatic (use the model's prediction) */
  emotionOverride: EmotionName | null
}
