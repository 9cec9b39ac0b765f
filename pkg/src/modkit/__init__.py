"""modkit: user-side moderation engine for multidimensional abuse detection."""

from .clients import ClientConfig, GenderClient, ToxicityClient, ToxicityScore
from .decisions import ActionRecord, DecisionEngine, UserDecision, in_scope
from .engine import ModerationEngine
from .indicators import (
    IndicatorConfig,
    IndicatorReport,
    evaluate,
    info_score,
    informational_asymmetry,
    longitudinal,
    volumetric_asymmetry,
)
from .model import (
    DirectedPairKey,
    Gender,
    GenderLabel,
    InteractionEvent,
    UserProfile,
    extract_mentions,
    first_name_of,
    parse_event,
)
from .store import InteractionStore, PairHistory

__version__ = "0.1.0"

__all__ = [
    "ActionRecord",
    "ClientConfig",
    "DecisionEngine",
    "DirectedPairKey",
    "Gender",
    "GenderClient",
    "GenderLabel",
    "IndicatorConfig",
    "IndicatorReport",
    "InteractionEvent",
    "InteractionStore",
    "ModerationEngine",
    "PairHistory",
    "ToxicityClient",
    "ToxicityScore",
    "UserDecision",
    "UserProfile",
    "evaluate",
    "extract_mentions",
    "first_name_of",
    "in_scope",
    "info_score",
    "informational_asymmetry",
    "longitudinal",
    "parse_event",
    "volumetric_asymmetry",
    "__version__",
]
