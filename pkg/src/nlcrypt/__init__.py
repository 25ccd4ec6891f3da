"""Cryptography over non-local (PR) boxes: simulator, protocols, attacks and exact oracles."""

from .bc import (
    BCParams,
    BlockTranscript,
    DelayAll,
    FlipAfterInput,
    Honest,
    HonestBob,
    InnerProductGuess,
    bob_guess,
    run_block,
    run_protocol,
)
from .errors import InvalidArgument, ProtocolViolation, ResourceLimit
from .harness import Scenario, chsh_check, no_signaling_audit, run_scenario
from .nlbox import ALICE, BOB, BoxSession, NLBoxInstance, Party, create_session, enter_input, is_used
from .oracles import binomial_tail, exact_pcy
from .ot import (
    BobOTAttack,
    OTParams,
    OTSession,
    alice_view_independence,
    bob_learns_both,
    run_ot,
    single_box_erasure,
    ww_reduction_demo,
)
from .parity import count11, decode, encode
from .stats import TrialSummary

__version__ = "0.1.0"
