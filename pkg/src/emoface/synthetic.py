"""Synthetic stand-in corpora shipped with the package.

Real dialogue and face corpora cannot be redistributed, so desk-scale runs
use two generated sets with the same file formats:

* a 10-dialogue corpus whose texts carry emotion-correlated keywords, small
  enough for a model to memorize;
* 16 procedurally drawn 64x64 faces (4 identities x 4 expressions) whose
  Action Unit annotations are true by construction: lip-corner raise AU12
  follows mouth curvature, AU01/AU02 follow brow raise, AU04 follows brow
  lowering.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from emoface.au_bridge import AU_NAMES
from emoface.data_prep.dialogues import DialogueTurn, save_dialogues
from emoface.data_prep.faces import AU_CSV_COLUMNS, AU_INTENSITY_MAX
from emoface.face_gan.image_io import save_png
from emoface.labels import EmotionLabel

_AU = {name: i for i, name in enumerate(AU_NAMES)}

# (user prompt, agent response, emotion of the response)
_OVERFIT_SCRIPT = [
    ("you broke my favorite mug again", "i am so angry about this mess", "anger"),
    ("there is mold all over the fridge", "that is disgusting beyond words", "disgust"),
    ("something is moving in the dark basement", "i am scared to go down there", "fear"),
    ("we won the lottery today", "that is wonderful news my friend", "happiness"),
    ("my old dog passed away last night", "i am so sorry that is heartbreaking", "sadness"),
    ("they threw me a party out of nowhere", "wow i did not expect that at all", "surprise"),
    ("the meeting starts at nine tomorrow", "noted i will be there on time", "neutral"),
    ("i do not know how i feel about the move", "it is a mix of feelings for sure", "non_neutral"),
    ("the cake turned out perfectly golden", "sweet victory it smells amazing", "happiness"),
    ("the trip got cancelled this morning", "such a shame i was looking forward to it", "sadness"),
]


def make_overfit_dialogues() -> list[tuple[DialogueTurn, ...]]:
    """Ten two-turn dialogues with keyword-emotion correlation."""
    dialogues = []
    for prompt, response, emotion_name in _OVERFIT_SCRIPT:
        emotion = EmotionLabel.from_name(emotion_name)
        dialogues.append((
            DialogueTurn(speaker_id="user", text=prompt, tokens=(), emotion=emotion),
            DialogueTurn(speaker_id="agent", text=response, tokens=(), emotion=emotion),
        ))
    return dialogues


def write_overfit_dialogues(path: str | Path) -> None:
    save_dialogues(make_overfit_dialogues(), path)


_SKIN_TONES = [(224, 196, 160), (198, 158, 124), (240, 214, 186), (176, 136, 104)]
_BG_TONES = [(190, 200, 210), (205, 195, 185), (186, 206, 192), (210, 204, 188)]


def draw_procedural_face(
    size: int = 64,
    smile: float = 0.0,
    brow_raise: float = 0.0,
    brow_lower: float = 0.0,
    identity: int = 0,
) -> np.ndarray:
    """Draw one face as an (H, W, 3) float array in [-1, 1].

    smile bends the mouth corners up (AU12), brow_raise lifts both brows
    (AU01/AU02), brow_lower drops and knits the inner brow ends (AU04).
    Rendered at 4x then downsampled for smooth gradients.
    """
    c = size * 4
    u = c / 256.0  # geometry below is laid out on a 256-unit canvas
    skin = _SKIN_TONES[identity % len(_SKIN_TONES)]
    img = Image.new("RGB", (c, c), _BG_TONES[identity % len(_BG_TONES)])
    d = ImageDraw.Draw(img)

    def xy(x, y):
        return x * u, y * u

    # head and ears
    d.ellipse([xy(40, 36), xy(216, 244)], fill=skin)
    # eyes
    for ex in (88, 168):
        d.ellipse([xy(ex - 20, 106), xy(ex + 20, 130)], fill=(250, 250, 250))
        d.ellipse([xy(ex - 7, 111), xy(ex + 7, 125)], fill=(60, 50, 45))
    # brows: straight thick lines whose endpoints move with the AUs
    lift = 16.0 * brow_raise
    drop = 12.0 * brow_lower
    knit = 14.0 * brow_lower  # inner ends pulled further down
    for ex, inner_sign in ((88, +1), (168, -1)):
        outer = (ex - inner_sign * 24, 92 - lift + drop)
        inner = (ex + inner_sign * 24, 92 - lift + drop + knit)
        d.line([xy(*outer), xy(*inner)], fill=(70, 55, 40), width=max(1, round(7 * u)))
    # nose
    d.line([xy(128, 140), xy(128, 168)], fill=(150, 116, 88), width=max(1, round(5 * u)))
    # mouth: parabola with corners lifted by the smile level
    corner_lift = 26.0 * smile
    points = []
    for i in range(25):
        t = i / 24.0
        x = 96 + 64 * t
        y = 196 - corner_lift * (2 * t - 1) ** 2
        points.append(xy(x, y))
    d.line(points, fill=(162, 70, 70), width=max(1, round(7 * u)), joint="curve")

    small = img.resize((size, size), Image.LANCZOS)
    return np.asarray(small, dtype=np.float32) / 127.5 - 1.0


# Per identity: one neutral face plus one smile, one brow-raise, and one
# brow-lower variant; activation levels differ across identities.
_SMILE_LEVELS = [0.4, 0.6, 0.8, 1.0]
_RAISE_LEVELS = [0.4, 0.6, 0.8, 1.0]
_EXPRESSION_NAMES = ["neutral", "happy", "surprised", "angry"]


def procedural_face_specs() -> list[dict]:
    """Metadata for the 16-face set, deterministic and file-free."""
    specs = []
    for identity in range(4):
        variants = [
            {"smile": 0.0, "brow_raise": 0.0, "brow_lower": 0.0},
            {"smile": _SMILE_LEVELS[identity], "brow_raise": 0.0, "brow_lower": 0.0},
            {"smile": 0.0, "brow_raise": _RAISE_LEVELS[identity], "brow_lower": 0.0},
            {"smile": 0.0, "brow_raise": 0.0, "brow_lower": 1.0},
        ]
        for v, params in enumerate(variants):
            au = np.zeros(len(AU_NAMES), dtype=np.float64)
            au[_AU["AU12"]] = params["smile"]
            au[_AU["AU01"]] = params["brow_raise"]
            au[_AU["AU02"]] = params["brow_raise"]
            au[_AU["AU04"]] = params["brow_lower"]
            specs.append({
                "image_path": f"images/face_{identity}{v}.png",
                "model_id": f"m{identity:02d}",
                "expression": _EXPRESSION_NAMES[v],
                "identity": identity,
                "au": au,
                **params,
            })
    return specs


def procedural_face_arrays(size: int = 64) -> tuple[list[np.ndarray], np.ndarray, list[dict]]:
    """All 16 images plus their (16, 17) activation matrix, in spec order."""
    specs = procedural_face_specs()
    images = [
        draw_procedural_face(
            size=size, smile=s["smile"], brow_raise=s["brow_raise"],
            brow_lower=s["brow_lower"], identity=s["identity"],
        )
        for s in specs
    ]
    activations = np.stack([s["au"] for s in specs])
    return images, activations, specs


def make_procedural_face_set(out_dir: str | Path, size: int = 64) -> list[dict]:
    """Write the face set in the ingestion formats: PNGs, index CSV, AU CSV."""
    out_dir = Path(out_dir)
    (out_dir / "images").mkdir(parents=True, exist_ok=True)
    images, activations, specs = procedural_face_arrays(size)

    index_lines = ["image_path,model_id,expression,gaze,camera_angle"]
    au_lines = ["face_id," + ",".join(AU_CSV_COLUMNS)]
    for img, act, spec in zip(images, activations, specs):
        save_png(img, out_dir / spec["image_path"])
        index_lines.append(
            f"{spec['image_path']},{spec['model_id']},{spec['expression']},frontal,frontal"
        )
        intensities = ",".join(f"{v * AU_INTENSITY_MAX:.3f}" for v in act)
        au_lines.append(f"{spec['image_path']},{intensities}")
    (out_dir / "index.csv").write_text("\n".join(index_lines) + "\n")
    (out_dir / "au.csv").write_text("\n".join(au_lines) + "\n")
    return specs


def make_synthetic_corpora(out_dir: str | Path, size: int = 64) -> None:
    """Write both stand-in corpora under one directory."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_overfit_dialogues(out_dir / "dialogues.jsonl")
    make_procedural_face_set(out_dir / "faces", size=size)
