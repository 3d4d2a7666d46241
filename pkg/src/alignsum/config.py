"""Alignment pipeline configuration.

One frozen value type carries every knob of the similarity-to-alignment
pipeline and serializes to a stable canonical string used for ranking
tie-breaks and cache keys.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields

from .alignment import AlignParams
from .errors import ValidationError
from .similarity import POOLINGS, SCORER_KINDS
from .windows import WindowConfig

_TEXT_SCORERS = ("rouge1", "rouge2", "rougeL")


@dataclass(frozen=True)
class AlignConfig:
    """Scorer choice, window scheme, and accumulation parameters.

    Window size 0 means "no windows" and is normalized to size 1, overlap 0
    at construction; so is the aggregation choice once windowing is off,
    making equivalent configurations compare and hash equal.
    """

    scorer: str
    s: int = 1
    o: int = 0
    agg: str = "sum"
    red: str = "sum"
    p: float = 1.0
    hd: float = 0.0
    vd: float = 0.0
    pooling: str = "mean"
    embeddings: str | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if self.scorer not in SCORER_KINDS:
            raise ValidationError(f"unknown scorer kind {self.scorer!r}")
        if self.pooling not in POOLINGS:
            raise ValidationError(f"unknown pooling {self.pooling!r}")
        s, o, agg, red = self.s, self.o, self.agg, self.red
        if s == 0:
            s, o = 1, 0
        if (s, o) == (1, 0):
            # Aggregation never runs on singleton windows; pin it so
            # equivalent configurations collapse to one.
            agg = "cat" if self.scorer in _TEXT_SCORERS else "sum"
            red = "sum"
        window = WindowConfig(size=s, overlap=o, agg=agg, red=red)
        if not window.disabled:
            if self.scorer in _TEXT_SCORERS and agg != "cat":
                raise ValidationError(f"scorer {self.scorer} requires agg 'cat'")
            if self.scorer not in _TEXT_SCORERS and agg == "cat":
                raise ValidationError(f"agg 'cat' not usable with {self.scorer}")
        AlignParams(p=self.p, hd=self.hd, vd=self.vd)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "o", o)
        object.__setattr__(self, "agg", agg)
        object.__setattr__(self, "red", red)

    @property
    def window(self) -> WindowConfig:
        return WindowConfig(size=self.s, overlap=self.o, agg=self.agg, red=self.red)

    @property
    def params(self) -> AlignParams:
        return AlignParams(p=self.p, hd=self.hd, vd=self.vd)

    def canonical_string(self) -> str:
        parts = [
            f"scorer={self.scorer}",
            f"s={self.s}",
            f"o={self.o}",
            f"agg={self.agg}",
            f"red={self.red}",
            f"p={self.p!r}",
            f"hd={self.hd!r}",
            f"vd={self.vd!r}",
        ]
        if self.scorer == "embedding":
            parts.append(f"pooling={self.pooling}")
            if self.embeddings:
                parts.append(f"embeddings={self.embeddings}")
        return ";".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_string().encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> dict:
        out = {
            "scorer": self.scorer,
            "s": self.s,
            "o": self.o,
            "agg": self.agg,
            "red": self.red,
            "p": self.p,
            "hd": self.hd,
            "vd": self.vd,
        }
        if self.scorer == "embedding":
            out["pooling"] = self.pooling
            if self.embeddings:
                out["embeddings"] = self.embeddings
        return out

    @classmethod
    def from_dict(cls, data: dict) -> AlignConfig:
        if not isinstance(data, dict):
            raise ValidationError("configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown configuration keys: {sorted(unknown)}")
        if "scorer" not in data:
            raise ValidationError("configuration missing 'scorer'")
        return cls(**data)
