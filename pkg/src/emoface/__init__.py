"""Emotion-bridged multimodal dialogue: text responses plus synthesized faces.

The pipeline has four stages: generate a textual reply from dialogue context,
predict its emotion, map the emotion to facial Action Unit targets, and edit a
base face image to express those targets with an attention-masked conditional
GAN.
"""

__version__ = "0.1.0"
