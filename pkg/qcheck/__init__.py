"""Exact verification of q-supercongruences, their q-WZ proofs and their classical limits."""

import logging
import sys

_initialized = False


def init_runtime() -> None:
    """Runtime bootstrap: stderr logging at QC_LOG_LEVEL and telemetry."""
    global _initialized
    if _initialized:
        return

    from qcheck.core.config import Config
    from qcheck.core.telemetry import init_telemetry

    logging.basicConfig(
        stream=sys.stderr,
        level=Config.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    init_telemetry()
    _initialized = True
