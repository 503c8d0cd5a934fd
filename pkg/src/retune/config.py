"""Runtime configuration with the stock defaults: section weights (15, 10, 1)
for folder/name/body, learning rate 1, default word weight 1, default user
competence 1."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from retune.errors import StoreError
from retune.ranker import RetrievalMode, SectionWeights

LISTEN_ENV_VAR = "RETUNE_LISTEN"


@dataclass
class EngineConfig:
    weights: SectionWeights = field(default_factory=SectionWeights)
    alpha: float = 1.0
    default_competence: float = 1.0
    users: dict[str, float] = field(default_factory=dict)
    default_mode: RetrievalMode = RetrievalMode.UNION
    listen: str = "127.0.0.1:8000"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.default_competence > 0:
            raise ValueError("default competence must be positive")
        for user_id, competence in self.users.items():
            if not competence > 0:
                raise ValueError(f"competence for {user_id!r} must be positive")

    def to_dict(self) -> dict:
        return {
            "section_weights": {
                "folder": self.weights.folder,
                "name": self.weights.name,
                "body": self.weights.body,
            },
            "alpha": self.alpha,
            "default_competence": self.default_competence,
            "users": dict(self.users),
            "default_mode": self.default_mode.value,
            "listen": self.listen,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        kwargs = {}
        if "section_weights" in data:
            kwargs["weights"] = SectionWeights(**data["section_weights"])
        if "alpha" in data:
            kwargs["alpha"] = float(data["alpha"])
        if "default_competence" in data:
            kwargs["default_competence"] = float(data["default_competence"])
        if "users" in data:
            kwargs["users"] = {str(k): float(v) for k, v in data["users"].items()}
        if "default_mode" in data:
            kwargs["default_mode"] = RetrievalMode(data["default_mode"])
        if "listen" in data:
            kwargs["listen"] = str(data["listen"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "EngineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise StoreError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StoreError(f"{path}: invalid JSON ({exc.msg})") from exc
        try:
            return cls.from_dict(data)
        except (TypeError, ValueError) as exc:
            raise StoreError(f"{path}: bad configuration: {exc}") from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
