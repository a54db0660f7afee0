import assert from "node:assert/strict"
import { test } from "node:test"

import { ApiClient } from "../src/api.js"
import { ChatStore } from "../src/state.js"
import type { ChatRequest } from "../src/types.js"

interface Scripted {
  requests: { path: string; body: unknown }[]
  client: ApiClient
  resolveNext: () => void
}

/** fetch stub: answers /session and /chat from a script, records requests. */
function scriptedClient(options: {
  failChat?: number // fail the first N chat calls
  hold?: boolean // keep chat promises pending until resolveNext()
} = {}): Scripted {
  const requests: { path: string; body: unknown }[] = []
  let chatFails = options.failChat ?? 0
  let turn = 0
  const holds: (() => void)[] = []

  const fetchImpl = (async (url: RequestInfo | URL, init?: RequestInit) => {
    const path = String(url).replace(/^https?:\/\/[^/]+/, "")
    const body = init?.body ? JSON.parse(String(init.body)) : undefined
    requests.push({ path, body })
    const respond = (status: number, payload: unknown) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "content-type": "application/json" },
      })

    if (path === "/session") {
      return respond(200, {
        session_id: "s000001",
        face_id: "images/face_00.png",
        base_face_png: "QkFTRQ==",
      })
    }
    if (path === "/chat") {
      if (options.hold) {
        await new Promise<void>((resolve) => holds.push(resolve))
      }
      if (chatFails > 0) {
        chatFails -= 1
        return respond(500, { detail: "synthetic failure" })
      }
      turn += 1
      const req = body as ChatRequest
      return respond(200, {
        text: `reply ${turn}`,
        emotion: req.emotion_override ?? "neutral",
        au_target: { AU12: req.emotion_override === "happiness" ? 1.0 : 0.0 },
        face_png: "RkFDRQ==",
        latency_ms: { total: 1 },
      })
    }
    return respond(404, { detail: `unexpected ${path}` })
  }) as typeof fetch

  return {
    requests,
    client: new ApiClient({ baseUrl: "http://test", fetchImpl }),
    resolveNext: () => holds.shift()?.(),
  }
}

test("start session populates ui state", async () => {
  const { client } = scriptedClient()
  const store = new ChatStore(client)
  assert.equal(await store.startSession("random"), true)
  assert.equal(store.state.sessionId, "s000001")
  assert.equal(store.state.faceId, "images/face_00.png")
  assert.equal(store.transcript.length, 0)
})

test("session failure shows banner and leaves transcript empty", async () => {
  const fetchImpl = (async () => {
    throw new Error("connection refused")
  }) as typeof fetch
  const store = new ChatStore(new ApiClient({ baseUrl: "http://down", fetchImpl }))
  assert.equal(await store.startSession("random"), false)
  assert.match(store.bannerError ?? "", /connection refused/)
  assert.equal(store.transcript.length, 0)
})

test("send appends optimistic user entry then agent entry with face", async () => {
  const { client } = scriptedClient()
  const store = new ChatStore(client, () => 1234)
  await store.startSession("random")
  assert.equal(await store.sendMessage("hello there"), true)
  assert.equal(store.transcript.length, 2)
  const [user, agent] = store.transcript
  assert.equal(user.author, "user")
  assert.equal(user.status, "ok")
  assert.equal(agent.author, "agent")
  // agent entries always carry emotion and face
  assert.ok(agent.emotion)
  assert.ok(agent.facePng)
  assert.ok(agent.auTarget)
})

test("empty input and missing session are rejected", async () => {
  const { client } = scriptedClient()
  const store = new ChatStore(client)
  assert.equal(store.canSend("hi"), false) // no session yet
  await store.startSession("random")
  assert.equal(store.canSend("   "), false)
  assert.equal(await store.sendMessage("  "), false)
  assert.equal(store.transcript.length, 0)
})

test("single in-flight request per session", async () => {
  const scripted = scriptedClient({ hold: true })
  const store = new ChatStore(scripted.client)
  await store.startSession("random")
  const first = store.sendMessage("one")
  assert.equal(store.state.pending, true)
  assert.equal(await store.sendMessage("two"), false) // blocked while pending
  scripted.resolveNext()
  assert.equal(await first, true)
  assert.equal(store.state.pending, false)
  const chats = scripted.requests.filter((r) => r.path === "/chat")
  assert.equal(chats.length, 1)
})

test("failed send marks the entry and retry resends it", async () => {
  const scripted = scriptedClient({ failChat: 1 })
  const store = new ChatStore(scripted.client)
  await store.startSession("random")
  assert.equal(await store.sendMessage("flaky message"), false)
  assert.equal(store.transcript.length, 1)
  assert.equal(store.transcript[0].status, "failed")
  assert.match(store.bannerError ?? "", /synthetic failure/)

  assert.equal(await store.retry(store.transcript[0].id), true)
  assert.equal(store.transcript[0].status, "ok")
  assert.equal(store.transcript.length, 2)
  const chats = scripted.requests.filter((r) => r.path === "/chat")
  assert.deepEqual(
    chats.map((c) => (c.body as ChatRequest).text),
    ["flaky message", "flaky message"],
  )
})

test("emotion override rides along and lands on the badge", async () => {
  const scripted = scriptedClient()
  const store = new ChatStore(scripted.client)
  await store.startSession("random")
  store.setEmotionOverride("happiness")
  await store.sendMessage("force a smile")
  const chat = scripted.requests.find((r) => r.path === "/chat")
  assert.equal((chat?.body as ChatRequest).emotion_override, "happiness")
  const agent = store.transcript[1]
  assert.equal(agent.emotion, "happiness")
  assert.equal(agent.auTarget?.AU12, 1.0)
})

test("transcript is append-only across a conversation", async () => {
  const { client } = scriptedClient()
  const store = new ChatStore(client)
  await store.startSession("random")
  const seen: number[][] = []
  store.subscribe(() => seen.push(store.transcript.map((e) => e.id)))
  await store.sendMessage("first")
  await store.sendMessage("second")
  for (let i = 1; i < seen.length; i++) {
    const prev = seen[i - 1]
    assert.deepEqual(seen[i].slice(0, prev.length), prev)
  }
})

test("snapshot restore replays an identical transcript", async () => {
  const { client } = scriptedClient()
  const store = new ChatStore(client, () => 42)
  await store.startSession("random")
  await store.sendMessage("persist me")
  const snapshot = JSON.parse(JSON.stringify(store.snapshot()))
  const restored = ChatStore.restore(client, snapshot)
  assert.deepEqual(restored.transcript, store.transcript)
  assert.equal(restored.state.sessionId, store.state.sessionId)
  assert.equal(restored.state.pending, false)
})
