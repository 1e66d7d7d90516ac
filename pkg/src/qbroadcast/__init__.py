"""Broadcasting of two-qubit entanglement and discord with Buzek-Hillery cloners."""

from .broadcast import (
    BroadcastVerdict,
    Family,
    Kind,
    ScanReport,
    bell_c3_range,
    bell_closed_form,
    bell_condition,
    classify_entanglement_broadcast,
    classify_qcsbe_broadcast,
    cone_edge_sweep,
    pure_state_range,
    pure_state_range_numeric,
    scan,
    werner_range,
    werner_range_numeric,
    werner_threshold,
)
from .cloning import ClonerSpec, CloneOutputs, Dependence, Locality, clone_closed_form, clone_oracle
from .discord import discord_local_output_sd, discord_oracle, geometric_discord, theorem_minimum_check
from .errors import DimensionMismatch, DomainError, InvalidState, QBroadcastError, SpecError
from .separability import is_separable, partial_transpose, w_minors
from .states import (
    BlochState,
    bell_diagonal,
    from_bloch,
    maximally_mixed,
    pure_schmidt,
    to_bloch,
    validate,
    werner_like,
)

__version__ = "0.1.0"
