"""Corpus ingestion: dialogues, AU-annotated faces, vocabulary, and splits."""

from emoface.data_prep.dialogues import (
    DialogueTurn,
    encode_dialogues,
    load_dialogues,
    save_dialogues,
)
from emoface.data_prep.faces import AU_CSV_COLUMNS, FaceRecord, load_face_corpus
from emoface.data_prep.splits import (
    DatasetSplits,
    Example,
    Split,
    examples_from_dialogues,
    make_splits,
)
from emoface.data_prep.tokenizer import detokenize, normalize_text, tokenize
from emoface.data_prep.vocab import (
    BOS_ID,
    EOS_ID,
    PAD_ID,
    RESERVED_TOKENS,
    UNK_ID,
    Vocabulary,
    build_vocab,
)

__all__ = [
    "AU_CSV_COLUMNS",
    "BOS_ID",
    "DatasetSplits",
    "DialogueTurn",
    "EOS_ID",
    "Example",
    "FaceRecord",
    "PAD_ID",
    "RESERVED_TOKENS",
    "Split",
    "UNK_ID",
    "Vocabulary",
    "build_vocab",
    "detokenize",
    "encode_dialogues",
    "examples_from_dialogues",
    "load_dialogues",
    "load_face_corpus",
    "make_splits",
    "normalize_text",
    "save_dialogues",
    "tokenize",
]
