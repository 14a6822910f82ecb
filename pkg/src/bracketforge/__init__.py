"""Tournament-format engine: compile formats to match graphs or pairing
policies, analyse them, and evaluate them exactly or by Monte Carlo."""

from .builder import (SemibracketSpec, attach_consolation, build_proper_bracket,
                      build_semibracket, check_proper, compose_linear, make_dynamic,
                      make_swiss, standard_seed_order)
from .core import (BracketSignature, DynamicPolicy, FinalPlace, LoserOf, Match,
                   Multibracket, Outcome, PlacementDistribution, SeedEntry, TieBlock,
                   ToSlot, WinnerOf, team_count)
from .dsl import compile_format, emit, load, parse
from .engine import enumerate_exact, play, simulate
from .flowchart import (classify, is_efficient, is_meaningful, is_monotone,
                        reachable_places, to_dot, validate)
from .metrics import compare_formats, dominance_matrix, expected_matches
from .models import StrengthModel, make_model
from .signatures import (enumerate_bracket_signatures, swiss_record_profile,
                         validate_bracket_signature)

__version__ = "0.1.0"

__all__ = [
    "SemibracketSpec", "attach_consolation", "build_proper_bracket", "build_semibracket",
    "check_proper", "compose_linear", "make_dynamic", "make_swiss", "standard_seed_order",
    "BracketSignature", "DynamicPolicy", "FinalPlace", "LoserOf", "Match", "Multibracket",
    "Outcome", "PlacementDistribution", "SeedEntry", "TieBlock", "ToSlot", "WinnerOf",
    "team_count", "compile_format", "emit", "load", "parse", "enumerate_exact", "play",
    "simulate", "classify", "is_efficient", "is_meaningful", "is_monotone",
    "reachable_places", "to_dot", "validate", "compare_formats", "dominance_matrix",
    "expected_matches", "StrengthModel", "make_model", "enumerate_bracket_signatures",
    "swiss_record_profile", "validate_bracket_signature",
]
