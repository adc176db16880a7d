"""Scoring and generation specifications with decoding-grid validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadSpec, UnsupportedStrategy

STRATEGIES = ("beam", "contrastive", "topk", "topp", "temperature")

# the 53-configuration study grid: 6 beam widths, 7x5 contrastive (k, alpha)
# pairs, 7 top-k values and 5 top-p values
BEAM_WIDTHS = (3, 5, 10, 15, 20, 50)
CS_K = (1, 3, 5, 10, 15, 20, 50)
CS_ALPHA = (0.2, 0.4, 0.6, 0.8, 1.0)
TOPK_GRID = (1, 3, 5, 10, 15, 20, 50)
TOPP_GRID = (0.6, 0.7, 0.8, 0.9, 0.95)


@dataclass(frozen=True)
class ScoringSpec:
    model: str
    topn: int = 50
    device: str = "cpu"
    prompt_in_window: bool = False
    batch_size: int = 8

    def __post_init__(self):
        if self.topn < 1:
            raise BadSpec(f"topn must be >= 1, got {self.topn}")
        if self.batch_size < 1:
            raise BadSpec(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class GenSpec:
    model: str
    strategy: str
    params: dict = field(default_factory=dict)
    max_new_tokens: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise UnsupportedStrategy(
                f"strategy {self.strategy!r} not in {STRATEGIES}"
            )
        if self.max_new_tokens < 1:
            raise BadSpec("max_new_tokens must be >= 1")
        self._check_params()

    def _check_params(self):
        p = self.params
        if self.strategy == "beam":
            width = p.get("width")
            if not isinstance(width, int) or width < 1:
                raise BadSpec(f"beam width must be a positive int, got {width!r}")
        elif self.strategy == "contrastive":
            k, alpha = p.get("k"), p.get("alpha")
            if not isinstance(k, int) or k < 1:
                raise BadSpec(f"contrastive k must be a positive int, got {k!r}")
            if not isinstance(alpha, (int, float)) or not 0.0 <= alpha <= 1.0:
                raise BadSpec(f"contrastive alpha must be in [0, 1], got {alpha!r}")
        elif self.strategy == "topk":
            k = p.get("k")
            if not isinstance(k, int) or k < 1:
                raise BadSpec(f"top-k k must be a positive int, got {k!r}")
        elif self.strategy == "topp":
            pv = p.get("p")
            if not isinstance(pv, (int, float)) or not 0.0 < pv <= 1.0:
                raise BadSpec(f"top-p p must be in (0, 1], got {pv!r}")
        elif self.strategy == "temperature":
            t = p.get("t")
            if not isinstance(t, (int, float)) or t <= 0.0:
                raise BadSpec(f"temperature must be > 0, got {t!r}")

    @property
    def on_grid(self) -> bool:
        """Whether the parameters sit on the declared study grid.

        Temperature sampling has no declared grid, so it is never on-grid.
        """
        p = self.params
        if self.strategy == "beam":
            return p["width"] in BEAM_WIDTHS
        if self.strategy == "contrastive":
            return p["k"] in CS_K and any(abs(p["alpha"] - a) < 1e-12 for a in CS_ALPHA)
        if self.strategy == "topk":
            return p["k"] in TOPK_GRID
        if self.strategy == "topp":
            return any(abs(p["p"] - g) < 1e-12 for g in TOPP_GRID)
        return False

    def config_string(self) -> str:
        """Canonical config label recorded in document headers."""
        p = self.params
        if self.strategy == "beam":
            core = f"beam:width={p['width']}"
        elif self.strategy == "contrastive":
            core = f"contrastive:k={p['k']};alpha={p['alpha']:g}"
        elif self.strategy == "topk":
            core = f"topk:k={p['k']};seed={self.seed}"
        elif self.strategy == "topp":
            core = f"topp:p={p['p']:g};seed={self.seed}"
        else:
            core = f"temperature:t={p['t']:g};seed={self.seed}"
        if not self.on_grid:
            core += ";off_grid"
        return core
