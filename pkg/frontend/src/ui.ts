/** DOM rendering. Everything reads from the store; events call store methods. */

import type { ChatStore } from "./state.js"
import type { ApiClient } from "./api.js"
import { EMOTIONS, type EmotionName, type TranscriptEntry } from "./types.js"

const PLACEHOLDER_SVG =
  "data:image/svg+xml;utf8," +
  encodeURIComponent(
    '<svg xmlns="http://www.w3.org/2000/svg" width="64" height="64">' +
    '<rect width="64" height="64" fill="#d8dde3"/>' +
    '<circle cx="32" cy="26" r="12" fill="#aab3bd"/>' +
    '<rect x="14" y="42" width="36" height="16" rx="8" fill="#aab3bd"/></svg>',
  )

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

function auTooltip(au: Record<string, number> | undefined): string {
  if (!au) return ""
  const active = Object.entries(au).filter(([, v]) => v > 0)
  if (active.length === 0) return "no active Action Units"
  return active.map(([k, v]) => `${k}=${v}`).join(", ")
}

function renderEntry(entry: TranscriptEntry, store: ChatStore): HTMLElement {
  const row = el("div", `entry ${entry.author} ${entry.status}`)
  if (entry.author === "agent") {
    const img = el("img", "face")
    // never show an agent turn without a face: placeholder until decode
    img.src = entry.facePng
      ? `data:image/png;base64,${entry.facePng}`
      : PLACEHOLDER_SVG
    img.alt = entry.emotion ? `face showing ${entry.emotion}` : "agent face"
    img.title = auTooltip(entry.auTarget)
    row.appendChild(img)
  }
  const bubble = el("div", "bubble")
  bubble.appendChild(el("div", "text", entry.text))
  if (entry.emotion) {
    const badge = el("span", "badge", entry.emotion)
    badge.title = auTooltip(entry.auTarget)
    bubble.appendChild(badge)
  }
  if (entry.status === "failed") {
    const resend = el("button", "resend", "resend")
    resend.onclick = () => void store.retry(entry.id)
    bubble.appendChild(resend)
  }
  row.appendChild(bubble)
  return row
}

export function mountApp(root: HTMLElement, store: ChatStore, api: ApiClient): void {
  root.innerHTML = ""
  const banner = el("div", "banner hidden")
  const gallery = el("div", "gallery")
  const transcript = el("div", "transcript")
  const controls = el("form", "controls")
  const input = el("input") as HTMLInputElement
  input.placeholder = "say something"
  const send = el("button", "send", "send") as HTMLButtonElement
  send.type = "submit"
  const override = el("select", "override") as HTMLSelectElement
  const auto = el("option", undefined, "emotion: auto") as HTMLOptionElement
  auto.value = ""
  override.appendChild(auto)
  for (const emotion of EMOTIONS) {
    const option = el("option", undefined, emotion) as HTMLOptionElement
    option.value = emotion
    override.appendChild(option)
  }
  controls.append(input, override, send)
  root.append(banner, gallery, transcript, controls)

  override.onchange = () =>
    store.setEmotionOverride((override.value || null) as EmotionName | null)
  controls.onsubmit = (event) => {
    event.preventDefault()
    const text = input.value
    if (store.canSend(text)) {
      input.value = ""
      void store.sendMessage(text)
    }
  }

  function render(): void {
    banner.textContent = store.bannerError ?? ""
    banner.classList.toggle("hidden", store.bannerError === null)
    send.disabled = store.state.pending || store.state.sessionId === null
    input.disabled = store.state.sessionId === null

    transcript.innerHTML = ""
    for (const entry of store.transcript) {
      transcript.appendChild(renderEntry(entry, store))
    }
    transcript.scrollTop = transcript.scrollHeight
  }

  store.subscribe(render)
  render()

  void (async () => {
    try {
      const faces = await api.faces()
      const randomButton = el("button", "face-pick", "random face") as HTMLButtonElement
      randomButton.onclick = () => void store.startSession("random")
      gallery.appendChild(randomButton)
      for (const face of faces) {
        const img = el("img", "face-pick") as HTMLImageElement
        img.src = `data:image/png;base64,${face.png}`
        img.title = face.face_id
        img.onclick = () => void store.startSession(face.face_id)
        gallery.appendChild(img)
      }
    } catch (err) {
      store.bannerError = err instanceof Error ? err.message : String(err)
      render()
    }
  })()
}
