"""AES padding bits as forward error correction, with ORBGRAND joint decoding."""

from .aes import AesKey, decrypt_block, derive_schedule, encrypt_block
from .backend import NUMBA_ENABLED, backend_name
from .channel import (ChannelConfig, SoftVector, add_noise, hard_decision,
                      modulate, noise_sigma)
from .codec import (DecodeOutcome, GeneratorConfig, LinearCode, decode_joint,
                    decode_syndrome, generate_rlc, pipeline_baseline,
                    pipeline_proposed, pipeline_separate)
from .harness import (SweepConfig, TrialLedger, goodput_model,
                      retransmission_rate, run_sweep, wilson_interval,
                      write_results)
from .orbgrand import (ErrorPattern, PatternGenerator, ReliabilityOrder,
                       apply_pattern, next_pattern, rank_by_reliability)
from .padding import PaddingSpec, check_padding, extract_payload, pad_payload

__version__ = "0.1.0"
