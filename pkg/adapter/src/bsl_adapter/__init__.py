"""Model-side adapter producing .bsl.jsonl token-event logs."""

from .decoding import Generation, generate_texts, greedy
from .errors import AdapterError
from .events import Doc, Event, write_log
from .scoring import rank_and_mass, score_texts, score_token_ids
from .specs import GenSpec, ScoringSpec

__version__ = "0.1.0"

__all__ = [
    "AdapterError", "Doc", "Event", "GenSpec", "Generation", "ScoringSpec",
    "generate_texts", "greedy", "rank_and_mass", "score_texts",
    "score_token_ids", "write_log", "__version__",
]
