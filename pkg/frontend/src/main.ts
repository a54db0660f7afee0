import { ApiClient } from "./api.js"
import { ChatStore, type SessionSnapshot } from "./state.js"
import { mountApp } from "./ui.js"

// single configuration knob: the service base URL
const params = new URLSearchParams(window.location.search)
const baseUrl = params.get("service") ?? "http://127.0.0.1:8000"
const STORAGE_KEY = `emoface-session:${baseUrl}`

const api = new ApiClient({ baseUrl })

function restoreOrCreate(): ChatStore {
  try {
    const raw = window.localStorage.getItem(STORAGE_KEY)
    if (raw) {
      // replaying the persisted session reproduces the same transcript
      return ChatStore.restore(api, JSON.parse(raw) as SessionSnapshot)
    }
  } catch {
    window.localStorage.removeItem(STORAGE_KEY)
  }
  return new ChatStore(api)
}

const store = restoreOrCreate()
store.subscribe(() => {
  if (!store.state.pending) {
    window.localStorage.setItem(STORAGE_KEY, JSON.stringify(store.snapshot()))
  }
})
mountApp(document.getElementById("app") as HTMLElement, store, api)
