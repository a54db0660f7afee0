"""Terminal chat loop: text replies on stdout, one face PNG per agent turn.

Output is deterministic given the checkpoints and EMOFACE_SEED, which makes
two runs with the same input byte-comparable.
"""

from __future__ import annotations

import sys
from pathlib import Path

from emoface.au_bridge import au_vector_to_dict
from emoface.face_gan.image_io import png_bytes
from emoface.service.config import ServiceConfig
from emoface.service.core import PipelineService

QUIT_COMMANDS = {"/quit", "/exit"}


def run_chat(config: ServiceConfig, out_dir: str | Path,
             stream_in=None, stream_out=None) -> None:
    stream_in = stream_in or sys.stdin
    stream_out = stream_out or sys.stdout
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    service = PipelineService(config)
    session = service.create_session("random")
    print(f"session {session.session_id} base face {session.base_face_id}",
          file=stream_out)
    print("type a message, or /quit to leave", file=stream_out)

    turn = 0
    for line in stream_in:
        text = line.strip()
        if not text:
            continue
        if text in QUIT_COMMANDS:
            break
        turn += 1
        reply = service.respond(session.session_id, text)
        face_name = f"turn_{turn:03d}.png"
        (out_dir / face_name).write_bytes(png_bytes(reply.face))
        active = au_vector_to_dict(reply.au_target)
        au_note = " ".join(f"{k}={v:g}" for k, v in active.items()) or "none"
        print(f"[{reply.emotion.label}] {reply.text}", file=stream_out)
        print(f"  au: {au_note}", file=stream_out)
        print(f"  face: {face_name}", file=stream_out)
    print("bye", file=stream_out)
