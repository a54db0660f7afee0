"""HTTP JSON API over the pipeline service.

Endpoints:
  POST /session {face_id?}                  -> {session_id, face_id, base_face_png}
  POST /chat {session_id, text, emotion_override?}
       -> {text, emotion, au_target, face_png, latency_ms}
  GET  /faces                               -> {faces: [{face_id, png}]}
  GET  /health                              -> checkpoint hashes and manifests

Images travel as base64 PNG strings inside JSON.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from emoface.au_bridge import au_vector_to_dict
from emoface.errors import FaceNotFoundError, SessionNotFoundError, UnknownLabelError
from emoface.service.core import PipelineService, face_to_base64_png


class SessionRequest(BaseModel):
    face_id: str = "random"


class ChatRequest(BaseModel):
    session_id: str
    text: str
    emotion_override: str | None = None


def create_app(service: PipelineService) -> FastAPI:
    app = FastAPI(title="emoface", version="0.1.0")

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "checkpoints": service.hashes,
            "nlg_manifest": service.nlg_manifest,
            "face_manifest": service.face_manifest,
            "image_size": service.gan_config.image_size,
            "seed": service.seed,
        }

    @app.get("/faces")
    def faces():
        return {
            "faces": [
                {
                    "face_id": face_id,
                    "png": face_to_base64_png(service.load_base_face(face_id)),
                }
                for face_id in service.list_faces()
            ]
        }

    @app.post("/session")
    def create_session(req: SessionRequest):
        try:
            session = service.create_session(req.face_id)
        except FaceNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return {
            "session_id": session.session_id,
            "face_id": session.base_face_id,
            "base_face_png": face_to_base64_png(session.base_face),
        }

    @app.post("/chat")
    def chat(req: ChatRequest):
        if not req.text.strip():
            raise HTTPException(status_code=400, detail="text must be non-empty")
        try:
            reply = service.respond(req.session_id, req.text, req.emotion_override)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except UnknownLabelError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {
            "text": reply.text,
            "emotion": reply.emotion.label,
            "au_target": au_vector_to_dict(reply.au_target, include_zeros=True),
            "face_png": face_to_base64_png(reply.face),
            "latency_ms": reply.latency_ms,
        }

    return app
