"""Layered explanations attached to plot regions.

Right-clicking the UI scatters question markers over the plots; each marker
resolves to one topic here.  Every topic answers at three depths -- a quick
summary, an expanded walk-through with a practical example, and a
mathematical treatment -- so readers choose how deep to go.
"""

from __future__ import annotations

import json
from functools import lru_cache

from .achievements import _data_text

LAYER_ORDER = ("summary", "expanded", "mathematical")


@lru_cache(maxsize=1)
def _topics() -> dict[str, dict[str, str]]:
    raw = json.loads(_data_text("plot_questions.json"))
    out = {}
    for topic, layers in raw.items():
        out[topic] = {layer: layers[layer] for layer in LAYER_ORDER}
    return out


def question_topics() -> list[str]:
    return list(_topics().keys())


def question_bank(topic: str) -> dict[str, str]:
    """Three-layer answer for a plot-region topic (summary, expanded,
    mathematical, in that order)."""
    topics = _topics()
    if topic not in topics:
        raise ValueError(f"unknown question topic {topic!r}")
    return dict(topics[topic])
