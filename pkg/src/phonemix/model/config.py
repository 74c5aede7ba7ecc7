"""Model hyperparameters.

Desk-scale defaults keep every test fast; the published-scale sizes
(384-dim embeddings, 256-dim encoders, batch 16) stay reachable through
the same fields.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class ModelConfig:
    embedding_dim: int = 32
    prior_encoder: str = "recurrent"  # "recurrent" | "attention"
    prior_hidden: int = 32
    acoustic_encoder: str = "recurrent"
    acoustic_hidden: int = 32
    predictor_layers: int = 2
    predictor_kernel: int = 3
    predictor_channels: int = 64
    n_max: int = 2
    duration_layers: int = 2
    duration_kernel: int = 3
    duration_channels: int = 64
    decoder_kind: str = "recurrent"
    decoder_hidden: int = 32
    mel_dims: int = 80
    batch_size: int = 16
    learning_rate: float = 0.001
    share_encoders: bool = False
    end_to_end_predictor: bool = False
    consonant_fraction: float = 0.3
    consonant_cap: int = 8
    duration_clamp: int = 400  # frame counts above this share one embedding row

    def __post_init__(self):
        sizes = (
            self.embedding_dim, self.prior_hidden, self.acoustic_hidden,
            self.predictor_layers, self.predictor_channels, self.n_max,
            self.duration_layers, self.duration_channels, self.decoder_hidden,
            self.mel_dims, self.batch_size, self.duration_clamp,
        )
        if any(s < 1 for s in sizes):
            raise ValueError(f"all model sizes must be >= 1: {self}")
        for kernel in (self.predictor_kernel, self.duration_kernel):
            if kernel % 2 == 0 or kernel < 1:
                raise ValueError(f"kernel widths must be odd and >= 1, got {kernel}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.share_encoders and (
            self.prior_encoder != self.acoustic_encoder
            or self.prior_hidden != self.acoustic_hidden
        ):
            raise ValueError("shared encoders need matching kind and hidden size")
        if not 0.0 < self.consonant_fraction < 1.0:
            raise ValueError(
                f"consonant fraction must be in (0, 1), got {self.consonant_fraction}"
            )

    @classmethod
    def paper_scale(cls, **overrides) -> "ModelConfig":
        """Published dimensions: 384-dim embeddings, 256-dim encoders."""
        base = cls(
            embedding_dim=384,
            prior_hidden=256,
            acoustic_hidden=256,
            decoder_hidden=256,
        )
        return replace(base, **overrides)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data)
