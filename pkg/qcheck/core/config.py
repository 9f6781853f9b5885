"""Application configuration."""

import os
from pathlib import Path

from qcheck.core.errors import UsageError

# Base directory of the q-congruence-checker project
BASE_DIR = Path(__file__).resolve().parent.parent.parent


def _env_flag(name: str, default: str = "false") -> bool:
    return os.environ.get(name, default).lower() == "true"


class Config:
    # Full witnesses of failing checks land here.
    WITNESS_DIR = os.environ.get("QC_WITNESS_DIR", str(BASE_DIR / "witnesses"))

    LOG_LEVEL = os.environ.get("QC_LOG_LEVEL", "WARNING").upper()
    AUDIT_LOG_LEVEL = os.environ.get("QC_AUDIT_LOG_LEVEL", "INFO").upper()

    # Lifts the documented suite bounds below.
    UNSAFE_EXTENDED = _env_flag("QC_UNSAFE_EXTENDED")

    # Telemetry stays off unless one of these is set.
    OTEL_ENDPOINT = os.environ.get("OTEL_EXPORTER_OTLP_ENDPOINT") or None
    OTEL_DEBUG = _env_flag("OTEL_DEBUG")

    @staticmethod
    def parallelism_from_env() -> int | None:
        """
        Worker processes requested through QC_PARALLELISM, or None when unset.

        0 means one worker per CPU.  QC_PARALLELISM wins over the suite config
        file; an explicit --parallelism flag wins over both.
        """
        raw = os.environ.get("QC_PARALLELISM", "").strip()
        if not raw:
            return None
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"QC_PARALLELISM must be a non-negative integer, got {raw!r}") from None
        if value < 0:
            raise UsageError(f"QC_PARALLELISM must be a non-negative integer, got {raw!r}")
        return value

    # -----------------------------------------------------------------------
    # Documented suite bounds
    # -----------------------------------------------------------------------

    WZ_N_MAX = 12
    WZ_K_ABS_MAX = 4
    TELESCOPE_M_MAX = 10
    TELESCOPE_K_ABS_MAX = 3
    THEOREM_N_MAX = 21
    LEMMA_N_MAX = 41
    PRIME_MAX = 31
    PRIME_POWER_MAX = 343
    DIVISIBILITY_N_MAX = 128
    CONJECTURE_N_MAX = 30
    BRIDGE_MAX = 20

    # -----------------------------------------------------------------------
    # Acceptance defaults ("all")
    # -----------------------------------------------------------------------

    DEFAULT_WZ_N_MAX = 10
    DEFAULT_WZ_K_RANGE = (-3, 3)
    DEFAULT_TELESCOPE_M_MAX = 8
    DEFAULT_TELESCOPE_K_RANGE = (-2, 2)
    DEFAULT_THEOREM_N = {
        "thm_1_1": [3, 5, 7, 9, 15],
        "thm_1_2": [3, 5, 7, 9, 15],
        "qdiv": [3, 5, 7, 9],
        "thm_5_1": [5, 7, 9],
        "thm_5_2": [5, 7, 9],
    }
    DEFAULT_LEMMA_N = list(range(3, 22, 2))
    DEFAULT_BOUNDARY_M = {
        "g_m_1": [3, 5, 7, 9],
        "g_m_0": [3, 5, 7, 9],
        "g_m_2": [5, 7, 9],
        "g_m_neg1": [5, 7, 9],
    }
    DEFAULT_REINDEX_M = [3, 5, 7]
    DEFAULT_PRIMES = {
        "div1_half": [3, 5, 7, 11, 13],
        "div1_full": [3, 5, 7, 11, 13],
        "guo1": [5, 7, 11, 13],
        "wang": [5, 7, 11, 13],
    }
    DEFAULT_PRIME_POWERS = [(5, 2), (7, 2)]
    DEFAULT_PRIME_POWER_EXPONENT = 2
    DEFAULT_AGREEMENT_PRIMES = [5, 7, 11]
    DEFAULT_DIVISIBILITY_N_MAX = 64
    DEFAULT_CONJECTURE_N_MAX = 24
    DEFAULT_BRIDGE_MAX = 10
