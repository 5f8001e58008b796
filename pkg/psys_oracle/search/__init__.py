from .choice import (
    Budget,
    Choice,
    ChoicePoint,
    Chooser,
    ExhaustiveChooser,
    ExploreResult,
    RandomChooser,
    ReplayChooser,
    Witness,
    WitnessRecord,
    explore,
    guess,
    replay,
    sample,
)

__all__ = [
    "Budget",
    "Choice",
    "ChoicePoint",
    "Chooser",
    "ExhaustiveChooser",
    "ExploreResult",
    "RandomChooser",
    "ReplayChooser",
    "Witness",
    "WitnessRecord",
    "explore",
    "guess",
    "replay",
    "sample",
]
