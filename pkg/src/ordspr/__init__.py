"""Exact step-function algebra on ordinal intervals and isometric SPR embeddings."""
from .ordinal import OMEGA, ONE, ZERO, Ord, add, beta0, compare, ell, floor_level, omega_pow, parse
from .seqspace import FinSeq, iota, iota_inverse, reindex, seq_sup_norm
from .stepfn import FnPair, StepFn, block_indicator, glue, indicator, shift, sup_norm

__version__ = "0.1.0"
