"""
Suite configuration, the registry of check families and ``run_suite``.

A check id is ``<family>.<variant>``; selecting a bare family selects every
variant.  Tasks are expanded in registry order, validated (parity, range and
suite bounds) before anything runs, and reported in expansion order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields
from typing import Any, Callable

from qcheck.algebra.congruence import LEMMA_IDS, CongruenceResult, verify_lemma
from qcheck.cli.report import OUTPUT_FORMATS, CheckReport
from qcheck.core.audit import log_check_event
from qcheck.core.config import Config
from qcheck.core.digest import witness_digest, write_witness
from qcheck.core.errors import UsageError
from qcheck.services import numeric, wzengine
from qcheck.services.runner import CheckOutcome, CheckTask, run_tasks

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class SuiteConfig:
    """What to run; ``None`` overrides fall back to the acceptance defaults in ``Config``."""

    selected_checks: list[str] | str = "all"
    n_max: int | None = None
    m_max: int | None = None
    k_range: tuple[int, int] | None = None
    n_list: list[int] | None = None
    primes: list[int] | None = None
    prime_powers: list[tuple[int, int]] | None = None
    output_format: str = "json_lines"
    fail_fast: bool = False
    parallelism: int = 0
    unsafe_extended: bool = field(default_factory=lambda: Config.UNSAFE_EXTENDED)
    witness_dir: str | None = None

    def validate(self) -> None:
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f"unknown output format {self.output_format!r}")
        if self.parallelism < 0:
            raise UsageError(f"parallelism must be >= 0, got {self.parallelism}")
        if self.k_range is not None:
            if len(self.k_range) != 2 or self.k_range[0] > self.k_range[1]:
                raise UsageError(f"k range must be [k_min, k_max] with k_min <= k_max, got {self.k_range}")
        if self.selected_checks != "all":
            if isinstance(self.selected_checks, str) or not self.selected_checks:
                raise UsageError("selected_checks must be \"all\" or a non-empty list of check ids")


def suite_config_from_json(raw: str) -> SuiteConfig:
    """
    Build a SuiteConfig from the text of a suite config file.

    An empty file selects everything.  Malformed JSON, a non-object, unknown
    keys or ill-typed values raise UsageError.
    """
    if not raw or not raw.strip():
        data: Any = {}
    else:
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as e:
            raise UsageError(f"suite config is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise UsageError("suite config must be a JSON object")

    known = {f.name for f in fields(SuiteConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise UsageError(f"unknown suite config keys: {', '.join(unknown)}")
    try:
        if data.get("k_range") is not None:
            data["k_range"] = tuple(data["k_range"])
        if data.get("prime_powers") is not None:
            data["prime_powers"] = [tuple(pr) for pr in data["prime_powers"]]
        config = SuiteConfig(**data)
    except TypeError as e:
        raise UsageError(f"bad suite config: {e}") from e
    config.validate()
    return config


# ---------------------------------------------------------------------------
# Check families
# ---------------------------------------------------------------------------

CheckResult = tuple[bool, dict]


def _congruence(result: CongruenceResult) -> CheckResult:
    return result.passed, result.to_json()


def _run_lemma(variant: str, p: dict) -> CheckResult:
    return _congruence(verify_lemma(variant, p["n"]))


def _run_wz(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.wz_pair_result(wzengine.WZPoint(p["n"], p["k"])))


def _run_telescope(variant: str, p: dict) -> CheckResult:
    if variant == "step":
        return _congruence(wzengine.telescope_result(p["m"], p["k"]))
    return _congruence(wzengine.telescope_span_check(p["m"], p["k_lo"], p["k_hi"]))


def _run_theorem(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.verify_theorem(variant, p["n"]))


def _run_boundary(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.verify_boundary(variant, p["m"]))


def _run_form(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.verify_boundary_form(variant, p["m"]))


def _run_reindex(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.reindex_identity_result(variant, p["m"]))


def _run_combination(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.verify_combination(variant, p["m"]))


def _run_vanishing(variant: str, p: dict) -> CheckResult:
    return _congruence(wzengine.verify_vanishing_summand(p["m"]))


def _run_super(variant: str, p: dict) -> CheckResult:
    spec = numeric.SupercongruenceSpec(variant, p["p"], p.get("r"))
    residue, target, modulus = numeric.supercongruence_residue(spec)
    return residue == target, {"residue": residue, "target": target, "modulus": modulus}


def _run_agreement(variant: str, p: dict) -> CheckResult:
    return numeric.check_half_full_agreement(p["p"]), {"modulus": p["p"] ** 3}


def _run_divisibility(variant: str, p: dict) -> CheckResult:
    spec = numeric.DivisibilitySpec(variant, p["n"])
    total = numeric.divisibility_sum(spec)
    divisor = numeric.divisibility_divisor(spec)
    remainder = total % divisor
    return remainder == 0, {"sum": str(total), "divisor": str(divisor), "remainder": str(remainder)}


def _run_conjecture(variant: str, p: dict) -> CheckResult:
    value = wzengine.conjecture61_expression(p["n"])
    return wzengine.is_laurent(value), {"value": value.to_json()}


def _run_bridge(variant: str, p: dict) -> CheckResult:
    symbolic, classical = numeric.bridge_values(variant, p["k"])
    return symbolic == classical, {"symbolic": str(symbolic), "classical": str(classical)}


def _odd(label_of: Callable[[str], str], key: str):
    def validate(variant: str, p: dict) -> None:
        wzengine.require_odd(label_of(variant), p[key])

    return validate


def _validate_wz(variant: str, p: dict) -> None:
    wzengine.WZPoint(p["n"], p["k"])


def _validate_telescope(variant: str, p: dict) -> None:
    if p["m"] < 1:
        raise UsageError(f"telescope needs m >= 1, got {p['m']}")
    if variant == "span" and p["k_lo"] >= p["k_hi"]:
        raise UsageError(f"telescope span needs k_lo < k_hi, got {p['k_lo']} >= {p['k_hi']}")


def _validate_super(variant: str, p: dict) -> None:
    numeric.SupercongruenceSpec(variant, p["p"], p.get("r"))


def _validate_agreement(variant: str, p: dict) -> None:
    numeric.SupercongruenceSpec("div1_half", p["p"])


def _validate_divisibility(variant: str, p: dict) -> None:
    numeric.DivisibilitySpec(variant, p["n"])


def _validate_positive(key: str, floor: int):
    def validate(variant: str, p: dict) -> None:
        if p[key] < floor:
            raise UsageError(f"{variant} needs {key} >= {floor}, got {p[key]}")

    return validate


@dataclass(frozen=True)
class Family:
    variants: tuple[str, ...]
    run: Callable[[str, dict], CheckResult]
    validate: Callable[[str, dict], None]
    bounds: dict[str, Callable[[], int]]


def _bound(name: str) -> Callable[[], int]:
    return lambda: getattr(Config, name)


_THEOREM_BOUND = {"n": _bound("THEOREM_N_MAX"), "m": _bound("THEOREM_N_MAX")}

FAMILIES: dict[str, Family] = {
    "lemma": Family(LEMMA_IDS, _run_lemma, _odd(lambda v: f"lemma {v}", "n"), {"n": _bound("LEMMA_N_MAX")}),
    "wz": Family(
        ("pair",), _run_wz, _validate_wz, {"n": _bound("WZ_N_MAX"), "k": _bound("WZ_K_ABS_MAX")}
    ),
    "telescope": Family(
        ("step", "span"),
        _run_telescope,
        _validate_telescope,
        {
            "m": _bound("TELESCOPE_M_MAX"),
            "k": _bound("TELESCOPE_K_ABS_MAX"),
            "k_lo": _bound("TELESCOPE_K_ABS_MAX"),
            "k_hi": _bound("TELESCOPE_K_ABS_MAX"),
        },
    ),
    "theorem": Family(wzengine.THEOREM_IDS, _run_theorem, _odd(lambda v: v, "n"), _THEOREM_BOUND),
    "boundary": Family(wzengine.BOUNDARY_IDS, _run_boundary, _odd(lambda v: v, "m"), _THEOREM_BOUND),
    "form": Family(wzengine.BOUNDARY_IDS, _run_form, _odd(lambda v: v, "m"), _THEOREM_BOUND),
    "reindex": Family(wzengine.REINDEX_IDS, _run_reindex, _odd(lambda v: v, "m"), _THEOREM_BOUND),
    "combination": Family(
        wzengine.COMBINATION_IDS, _run_combination, _odd(lambda v: v, "m"), _THEOREM_BOUND
    ),
    "vanishing": Family(("summand",), _run_vanishing, _odd(lambda v: "vanishing summand", "m"), _THEOREM_BOUND),
    "super": Family(numeric.SUPERCONGRUENCE_IDS, _run_super, _validate_super, {"p": _bound("PRIME_MAX")}),
    "agreement": Family(("div1",), _run_agreement, _validate_agreement, {"p": _bound("PRIME_MAX")}),
    "divisibility": Family(
        numeric.DIVISIBILITY_IDS, _run_divisibility, _validate_divisibility, {"n": _bound("DIVISIBILITY_N_MAX")}
    ),
    "conjecture": Family(
        ("laurent",), _run_conjecture, _validate_positive("n", 1), {"n": _bound("CONJECTURE_N_MAX")}
    ),
    "bridge": Family(numeric.BRIDGE_IDS, _run_bridge, _validate_positive("k", 0), {"k": _bound("BRIDGE_MAX")}),
}


def run_check(task: CheckTask) -> CheckResult:
    """Dispatch one task to its family; module level so worker processes can import it."""
    return FAMILIES[task.family].run(task.variant, task.param_dict)


def resolve_selection(selected: list[str] | str) -> list[str]:
    """Expand ``"all"`` and bare family names into ``family.variant`` ids, in registry order."""
    if selected == "all":
        return [f"{name}.{v}" for name, fam in FAMILIES.items() for v in fam.variants]
    wanted: set[str] = set()
    for check_id in selected:
        family, _, variant = check_id.partition(".")
        if family not in FAMILIES:
            raise UsageError(f"unknown check id {check_id!r}")
        if not variant:
            wanted.update(f"{family}.{v}" for v in FAMILIES[family].variants)
        elif variant in FAMILIES[family].variants:
            wanted.add(check_id)
        else:
            raise UsageError(f"unknown check id {check_id!r}")
    return [cid for cid in resolve_selection("all") if cid in wanted]


def _override(value, default):
    return default if value is None else value


def _upper(check_id: str, name: str, value: int | None, default: int, floor: int) -> int:
    upper = _override(value, default)
    if upper < floor:
        raise UsageError(f"{check_id} needs {name} >= {floor}, got {upper}")
    return upper


def _expand(check_id: str, config: SuiteConfig) -> list[CheckTask]:
    family, variant = check_id.split(".", 1)
    make = CheckTask.make
    if family == "lemma":
        return [make(check_id, n=n) for n in _override(config.n_list, Config.DEFAULT_LEMMA_N)]
    if family == "wz":
        n_max = _upper(check_id, "n_max", config.n_max, Config.DEFAULT_WZ_N_MAX, 0)
        k_lo, k_hi = _override(config.k_range, Config.DEFAULT_WZ_K_RANGE)
        return [make(check_id, n=n, k=k) for n in range(n_max + 1) for k in range(k_lo, k_hi + 1)]
    if family == "telescope":
        m_max = _upper(check_id, "m_max", config.m_max, Config.DEFAULT_TELESCOPE_M_MAX, 1)
        k_lo, k_hi = _override(config.k_range, Config.DEFAULT_TELESCOPE_K_RANGE)
        if variant == "step":
            return [make(check_id, m=m, k=k) for m in range(1, m_max + 1) for k in range(k_lo, k_hi + 1)]
        if k_lo == k_hi:
            return []
        return [make(check_id, m=m, k_lo=k_lo, k_hi=k_hi) for m in range(1, m_max + 1)]
    if family == "theorem":
        return [make(check_id, n=n) for n in _override(config.n_list, Config.DEFAULT_THEOREM_N[variant])]
    if family in ("boundary", "form"):
        return [make(check_id, m=m) for m in _override(config.n_list, Config.DEFAULT_BOUNDARY_M[variant])]
    if family in ("reindex", "combination", "vanishing"):
        return [make(check_id, m=m) for m in _override(config.n_list, Config.DEFAULT_REINDEX_M)]
    if family == "super":
        if variant.endswith("_pr"):
            prime_powers = _override(config.prime_powers, Config.DEFAULT_PRIME_POWERS)
            return [make(check_id, p=p, r=r) for p, r in prime_powers]
        return [make(check_id, p=p) for p in _override(config.primes, Config.DEFAULT_PRIMES[variant])]
    if family == "agreement":
        return [make(check_id, p=p) for p in _override(config.primes, Config.DEFAULT_AGREEMENT_PRIMES)]
    if family == "divisibility":
        n_max = _upper(check_id, "n_max", config.n_max, Config.DEFAULT_DIVISIBILITY_N_MAX, 2)
        return [make(check_id, n=n) for n in range(2, n_max + 1)]
    if family == "conjecture":
        n_max = _upper(check_id, "n_max", config.n_max, Config.DEFAULT_CONJECTURE_N_MAX, 1)
        return [make(check_id, n=n) for n in range(1, n_max + 1)]
    k_max = _upper(check_id, "n_max", config.n_max, Config.DEFAULT_BRIDGE_MAX, 0)
    return [make(check_id, k=k) for k in range(k_max + 1)]


def validate_task(task: CheckTask, unsafe_extended: bool = False) -> None:
    """Preconditions always; documented suite bounds unless ``unsafe_extended``."""
    family = FAMILIES[task.family]
    params = task.param_dict
    family.validate(task.variant, params)
    if unsafe_extended:
        return
    for key, bound in family.bounds.items():
        if key in params and abs(params[key]) > bound():
            raise UsageError(
                f"{task.check_id} {key}={params[key]} exceeds the suite bound {bound()} "
                "(set QC_UNSAFE_EXTENDED=true to lift it)"
            )
    if "r" in params and params["p"] ** params["r"] > Config.PRIME_POWER_MAX:
        raise UsageError(
            f"{task.check_id} p^r={params['p'] ** params['r']} exceeds the suite bound {Config.PRIME_POWER_MAX}"
        )


def expand_tasks(config: SuiteConfig) -> list[CheckTask]:
    """Every task the config selects, validated, in deterministic order."""
    config.validate()
    selected = resolve_selection(config.selected_checks)
    tasks = [task for check_id in selected for task in _expand(check_id, config)]
    if not tasks:
        raise UsageError("the selection expands to no checks")
    for task in tasks:
        validate_task(task, config.unsafe_extended)
    return tasks


def _to_report(outcome: CheckOutcome, witness_dir: str) -> CheckReport:
    task = outcome.task
    params = task.param_dict
    payload: dict[str, Any] = {
        "check_id": task.check_id,
        "params": params,
        "pass": outcome.passed,
        "witness": outcome.witness,
    }
    digest = witness_digest(payload)
    detail_path = None
    if not outcome.passed:
        detail_path = write_witness(witness_dir, task.check_id, digest, payload)

    status = "pass" if outcome.passed else ("error" if outcome.error else "fail")
    details = {"detail_path": detail_path} if detail_path else None
    if outcome.error:
        details = {**(details or {}), "error": outcome.error}
    log_check_event(task.check_id, params, status, outcome.elapsed_ms, digest, details)
    return CheckReport(task.check_id, params, outcome.passed, digest, outcome.elapsed_ms, detail_path)


def run_suite(
    config: SuiteConfig, check: Callable[[CheckTask], CheckResult] = run_check
) -> tuple[list[CheckReport], int]:
    """Run every selected check; exit code 0 all pass, 1 any failure, 2 usage error."""
    try:
        tasks = expand_tasks(config)
    except UsageError as e:
        logger.error(f"Suite rejected: {e}")
        return [], EXIT_USAGE

    logger.info(f"Running {len(tasks)} checks")
    outcomes = run_tasks(tasks, check, config.parallelism, config.fail_fast)
    reports = [_to_report(o, config.witness_dir or Config.WITNESS_DIR) for o in outcomes]
    exit_code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return reports, exit_code
