"""Session management and the response pipeline.

respond() chains the three stages on each user turn: the response generator
produces text and an emotion from the session history, the AU bridge turns
the emotion into target activations, and the face generator edits the
session's neutral base face to express them. Model parameters are immutable
after loading; each session's history is appended under its own lock so
cross-session requests never block each other.
"""

from __future__ import annotations

import base64
import itertools
import json
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from emoface.au_bridge import (
    AuMappingTable,
    au_vector_from_dict,
    map_emotion_to_au,
    validate_au_values,
)
from emoface.data_prep.dialogues import DialogueTurn
from emoface.data_prep.faces import load_face_corpus
from emoface.data_prep.tokenizer import detokenize, tokenize
from emoface.errors import FaceNotFoundError, SessionNotFoundError
from emoface.face_gan.image_io import load_png, png_bytes
from emoface.face_gan.networks import generator_forward
from emoface.face_gan.train import checkpoint_hash as face_checkpoint_hash
from emoface.face_gan.train import load_face_checkpoint
from emoface.labels import EmotionLabel, Expression
from emoface.nlg.data import build_context_ids
from emoface.nlg.train import checkpoint_hash as nlg_checkpoint_hash
from emoface.nlg.train import load_nlg_checkpoint
from emoface.service.config import ServiceConfig, resolve_seed


@dataclass
class Session:
    session_id: str
    base_face_id: str
    base_face: np.ndarray  # (H, W, 3) in [-1, 1], neutral expression
    created_at: float
    history: list[DialogueTurn] = field(default_factory=list)
    last_face: np.ndarray | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class Reply:
    text: str
    emotion: EmotionLabel
    au_target: np.ndarray
    face: np.ndarray
    latency_ms: dict[str, float]


class PipelineService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.nlg, self.vocab, self.nlg_manifest = load_nlg_checkpoint(config.nlg_checkpoint)
        self.generator, _, self.gan_config, self.face_manifest = load_face_checkpoint(
            config.face_checkpoint
        )
        self.au_table = (
            AuMappingTable.from_json(config.au_table)
            if config.au_table
            else AuMappingTable.default()
        )
        records = load_face_corpus(config.face_index, config.face_au_csv)
        self.base_faces = {
            r.image_path: r for r in records if r.expression is Expression.NEUTRAL
        }
        if not self.base_faces:
            raise ValueError("face corpus has no neutral-expression records")
        self._image_root = Path(config.face_image_root)
        self.seed = resolve_seed(config.seed)
        self._rng = random.Random(self.seed)
        self._session_counter = itertools.count(1)
        self._sessions: dict[str, Session] = {}
        self._sessions_lock = threading.Lock()
        self.hashes = {
            "nlg_weights_sha256": nlg_checkpoint_hash(config.nlg_checkpoint),
            "face_weights_sha256": face_checkpoint_hash(config.face_checkpoint),
        }

    # ---- faces ----

    def list_faces(self) -> list[str]:
        return sorted(self.base_faces)

    def load_base_face(self, face_id: str) -> np.ndarray:
        return load_png(self._image_root / face_id)

    # ---- sessions ----

    def create_session(self, face_id: str = "random") -> Session:
        if face_id == "random":
            face_id = self._rng.choice(self.list_faces())
        elif face_id not in self.base_faces:
            raise FaceNotFoundError(f"unknown base face {face_id!r}")
        session = Session(
            session_id=f"s{next(self._session_counter):06d}",
            base_face_id=face_id,
            base_face=self.load_base_face(face_id),
            created_at=time.time(),
        )
        with self._sessions_lock:
            self._sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        with self._sessions_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionNotFoundError(f"unknown session {session_id!r}") from None

    # ---- synthesis ----

    def synthesize_face(self, base_face: np.ndarray, emotion_or_au) -> np.ndarray:
        """Edit a base face toward an emotion name or an explicit AU target.

        Emotion names route through the mapping table; explicit vectors (a
        {AU name: activation} dict or a 17-long sequence) are validated and
        passed straight to the generator.
        """
        if isinstance(emotion_or_au, EmotionLabel):
            target = map_emotion_to_au(emotion_or_au, self.au_table)
        elif isinstance(emotion_or_au, str):
            target = map_emotion_to_au(
                EmotionLabel.from_name(emotion_or_au), self.au_table
            )
        elif isinstance(emotion_or_au, dict):
            target = au_vector_from_dict(emotion_or_au)
            validate_au_values(target)
        else:
            target = np.asarray(emotion_or_au, dtype=np.float64)
            validate_au_values(target)
        _, edited = generator_forward(self.generator, base_face, target)
        return edited

    # ---- the pipeline ----

    def respond(self, session_id: str, user_text: str,
                emotion_override: EmotionLabel | str | None = None) -> Reply:
        session = self.get_session(session_id)
        if emotion_override is not None and not isinstance(emotion_override, EmotionLabel):
            emotion_override = EmotionLabel.from_name(emotion_override)
        with session.lock:
            user_turn = DialogueTurn(
                speaker_id="user",
                text=user_text,
                tokens=tuple(self.vocab.encode(tokenize(user_text))),
                emotion=EmotionLabel.NEUTRAL,  # user emotion is not annotated
            )
            session.history.append(user_turn)

            t0 = time.perf_counter()
            context = build_context_ids(
                session.history,
                self.nlg.config.max_context_turns,
                self.nlg.config.max_context_len,
            )
            prediction = self.nlg.generate(torch.tensor(context, dtype=torch.long))
            text = detokenize(self.vocab.decode(prediction.tokens))
            t1 = time.perf_counter()

            emotion = emotion_override if emotion_override is not None else prediction.emotion
            au_target = map_emotion_to_au(emotion, self.au_table)
            t2 = time.perf_counter()

            edit_input = (
                session.last_face
                if self.config.reedit_last_face and session.last_face is not None
                else session.base_face
            )
            face = self.synthesize_face(edit_input, au_target)
            t3 = time.perf_counter()

            agent_turn = DialogueTurn(
                speaker_id="agent",
                text=text,
                tokens=prediction.tokens,
                emotion=emotion,
            )
            session.history.append(agent_turn)
            session.last_face = face
            self._persist(session, user_turn, agent_turn)

        return Reply(
            text=text,
            emotion=emotion,
            au_target=au_target,
            face=face,
            latency_ms={
                "nlg": (t1 - t0) * 1000.0,
                "bridge": (t2 - t1) * 1000.0,
                "face": (t3 - t2) * 1000.0,
                "total": (t3 - t0) * 1000.0,
            },
        )

    def _persist(self, session: Session, *turns: DialogueTurn) -> None:
        if not self.config.persist_dir:
            return
        persist_dir = Path(self.config.persist_dir)
        persist_dir.mkdir(parents=True, exist_ok=True)
        with open(persist_dir / f"{session.session_id}.jsonl", "a", encoding="utf-8") as f:
            for turn in turns:
                f.write(json.dumps({
                    "speaker": turn.speaker_id,
                    "text": turn.text,
                    "emotion": turn.emotion.label,
                }, sort_keys=True) + "\n")


def face_to_base64_png(face: np.ndarray) -> str:
    return base64.b64encode(png_bytes(face)).decode("ascii")
