"""Quantified constraint satisfaction: containment, entailment, Q-cores."""

import json

from ._qcsp import *  # noqa: F401,F403
from ._qcsp import Sentence, Structure


def structure(data):
    """Builds a Structure from a dict in the structure file format."""
    return Structure.from_json(json.dumps(data))


def sentence(text):
    return Sentence.parse(text)
