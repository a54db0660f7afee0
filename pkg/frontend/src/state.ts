/** Session state machine and transcript store.
 *
 * Invariants kept here rather than in the DOM layer:
 *  - the transcript is append-only; entries mutate status in place but are
 *    never removed or reordered;
 *  - at most one chat request is in flight per session;
 *  - an agent entry always carries its emotion and face image;
 *  - a serialized session replays to an identical transcript.
 */

import { ApiClient } from "./api.js"
import type {
  EmotionName,
  TranscriptEntry,
  UiSessionState,
} from "./types.js"

export type Listener = () => void

export interface SessionSnapshot {
  state: UiSessionState
  transcript: TranscriptEntry[]
}

export class ChatStore {
  readonly state: UiSessionState = {
    sessionId: null,
    faceId: null,
    baseFacePng: null,
    pending: false,
    emotionOverride: null,
  }
  readonly transcript: TranscriptEntry[] = []
  bannerError: string | null = null

  private nextId = 1
  private listeners: Listener[] = []

  constructor(
    private readonly api: ApiClient,
    private readonly now: () => number = Date.now,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener)
  }

  private emit(): void {
    for (const listener of this.listeners) listener()
  }

  setEmotionOverride(value: EmotionName | null): void {
    this.state.emotionOverride = value
    this.emit()
  }

  async startSession(faceId: string): Promise<boolean> {
    this.bannerError = null
    this.emit()
    try {
      const session = await this.api.createSession(faceId)
      this.state.sessionId = session.session_id
      this.state.faceId = session.face_id
      this.state.baseFacePng = session.base_face_png
      this.emit()
      return true
    } catch (err) {
      // no transcript entry on session failure, just the banner
      this.bannerError = err instanceof Error ? err.message : String(err)
      this.emit()
      return false
    }
  }

  canSend(text: string): boolean {
    return (
      this.state.sessionId !== null && !this.state.pending && text.trim().length > 0
    )
  }

  async sendMessage(text: string): Promise<boolean> {
    if (!this.canSend(text)) return false
    const entry: TranscriptEntry = {
      id: this.nextId++,
      author: "user",
      text: text.trim(),
      status: "pending",
      timestamp: this.now(),
    }
    this.transcript.push(entry) // optimistic
    return this.dispatch(entry)
  }

  /** Re-send a failed user entry; the original entry flips back to ok. */
  async retry(entryId: number): Promise<boolean> {
    const entry = this.transcript.find((e) => e.id === entryId)
    if (!entry || entry.author !== "user" || entry.status !== "failed") return false
    if (this.state.pending) return false
    entry.status = "pending"
    return this.dispatch(entry)
  }

  private async dispatch(entry: TranscriptEntry): Promise<boolean> {
    this.state.pending = true
    this.bannerError = null
    this.emit()
    try {
      const reply = await this.api.chat({
        session_id: this.state.sessionId as string,
        text: entry.text,
        ...(this.state.emotionOverride
          ? { emotion_override: this.state.emotionOverride }
          : {}),
      })
      entry.status = "ok"
      this.transcript.push({
        id: this.nextId++,
        author: "agent",
        text: reply.text,
        status: "ok",
        timestamp: this.now(),
        emotion: reply.emotion,
        auTarget: reply.au_target,
        facePng: reply.face_png,
      })
      return true
    } catch (err) {
      entry.status = "failed"
      this.bannerError = err instanceof Error ? err.message : String(err)
      return false
    } finally {
      this.state.pending = false
      this.emit()
    }
  }

  /** Serializable snapshot for page-reload persistence. */
  snapshot(): SessionSnapshot {
    return {
      state: { ...this.state, pending: false },
      transcript: this.transcript.map((e) => ({ ...e })),
    }
  }

  /** Rebuild a store whose transcript matches the snapshot exactly. */
  static restore(api: ApiClient, snapshot: SessionSnapshot): ChatStore {
    const store = new ChatStore(api)
    Object.assign(store.state, snapshot.state, { pending: false })
    for (const entry of snapshot.transcript) {
      store.transcript.push({ ...entry })
      store.nextId = Math.max(store.nextId, entry.id + 1)
    }
    return store
  }
}
