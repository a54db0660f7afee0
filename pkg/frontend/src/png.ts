/** Minimal PNG helpers: base64 decode and IHDR dimension parsing. */

const PNG_SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]

export function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const bin = atob(b64)
    const out = new Uint8Array(bin.length)
    for (let i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i)
    return out
  }
  return new Uint8Array(Buffer.from(b64, "base64"))
}

/**
 * Width and height from the IHDR chunk, which the format pins directly after
 * the 8-byte signature: 4-byte length, "IHDR", then two big-endian uint32s.
 */
export function pngDimensions(bytes: Uint8Array): { width: number; height: number } {
  if (bytes.length < 24 || PNG_SIGNATURE.some((b, i) => bytes[i] !== b)) {
    throw new Error("not a PNG stream")
  }
  const tag = String.fromCharCode(bytes[12], bytes[13], bytes[14], bytes[15])
  if (tag !== "IHDR") {
    throw new Error(`expected IHDR as first chunk, found ${tag}`)
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength)
  return { width: view.getUint32(16), height: view.getUint32(20) }
}

export function base64PngDimensions(b64: string): { width: number; height: number } {
  return pngDimensions(base64ToBytes(b64))
}
