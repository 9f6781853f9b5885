"""
Audit logging of executed checks.
Outputs structured JSON records on stderr so that stdout stays reserved for reports.
"""

import logging
import sys
from typing import Any, Dict, Optional

from pythonjsonlogger.json import JsonFormatter

from qcheck.core.config import Config

# Dedicated logger for check executions
audit_logger = logging.getLogger("qcheck.audit")
audit_logger.setLevel(Config.AUDIT_LOG_LEVEL)

# Keep audit records out of the root logger
audit_logger.propagate = False

log_handler = logging.StreamHandler(sys.stderr)
formatter = JsonFormatter(fmt="%(asctime)s %(levelname)s %(name)s %(message)s", datefmt="%Y-%m-%dT%H:%M:%S%z")
log_handler.setFormatter(formatter)
audit_logger.addHandler(log_handler)


def log_check_event(
    check_id: str,
    params: Dict[str, Any],
    status: str,
    elapsed_ms: int,
    witness_digest: str = "",
    details: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log a structured record for one executed check.

    :param check_id: The check identifier (e.g., "theorem.thm_1_1")
    :param params: The instance parameters (e.g., {"n": 9})
    :param status: "pass", "fail" or "error"
    :param elapsed_ms: Wall-clock time spent in the check
    :param witness_digest: SHA-256 digest of the witness payload
    :param details: Additional context (error message, detail file path)
    """
    event_data = {
        "event_type": "check",
        "check_id": check_id,
        "params": params,
        "status": status,
        "elapsed_ms": elapsed_ms,
        "witness_digest": witness_digest,
        "details": details or {},
    }

    message = f"Check {check_id} {params} finished with status {status}"
    level = logging.INFO if status == "pass" else logging.WARNING
    audit_logger.log(level, message, extra=event_data)
