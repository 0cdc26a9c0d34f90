"""
CAUSAL POLYTOPE TOOLKIT - COMMAND LINE
Reproducible runs of every check, with JSON reports on stdout or --out

Commands:
- enum       exhaustive scan of deterministic processes (n <= 3) into a catalog
- check      consistency of a deterministic process or a process matrix
- dual       both directions of the no-signaling / classical-process duality
- effect     Normal / Extra verdict of an effect, or the fine-tuning probe
- discover   seeded ILP sampling of four-party vertices into a catalog
- structure  causal-structure classes of a catalog
- switch     the PAR-SER switch as a process and as a diagonal matrix
- certify    Born-rule certification of the quantum switch

Exit codes: 0 pass, 1 verified failure, 2 usage or I/O error.
"""

import argparse
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from joblib import Parallel, delayed

from config import (
    CATALOG_DIR, CF_THREADS, DEFAULT_CATALOG_PATH, EFFECT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_USAGE,
    ILP_CONFIG, LOG_CONFIG, MEASUREMENT_PRESETS, QUANTUM_CONFIG, RANDOM_SEED,
)
from modules import process as process_mod
from modules.catalog import Catalog
from modules.caustruct import classify_type, structure_census
from modules.discover4 import ilp_sample
from modules.duality import check_duality, check_sampled_duality
from modules.effects import ZMatrix, agreement_scan, classify, probe_fractional_vertex
from modules.errors import (
    BudgetExceededError, CatalogError, CausalPolytopeError, MeasurementConfigError, PreconditionError,
)
from modules.formats import read_json, read_matrix_csv, write_report
from modules.process import DetProcess, ProcessVectorGeneral, dk_class, dk_distribution, is_consistent, validate_vector
from modules.quantumcert import I3_READINGS, certify
from modules.switchlab import switch_report

logger = logging.getLogger("cli")

NAMED_PROCESSES = {
    "self_circle": process_mod.self_circle,
    "unidirectional_cycle": process_mod.unidirectional_cycle,
    "fixed_order": process_mod.fixed_order_example,
    "adaptive": process_mod.adaptive_example,
    "indefinite": process_mod.indefinite_example,
    "majority_piecewise": process_mod.majority_piecewise_process,
}


# ============================================================================
# RUN CONFIGURATION & LOGGING
# ============================================================================

@dataclass
class RunConfig:
    command: str
    seed: int = RANDOM_SEED
    threads: int = CF_THREADS
    seconds: float = ILP_CONFIG["default_seconds"]
    n: Optional[int] = None
    out: Optional[Path] = None
    catalog: Optional[Path] = None
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            seed=args.seed,
            threads=max(1, min(args.threads or CF_THREADS, CF_THREADS)),
            seconds=args.seconds,
            n=getattr(args, "n", None),
            out=args.out,
            catalog=getattr(args, "catalog", None),
            verbose=args.verbose,
        )


def configure_logging(verbose: bool = False):
    """stderr plus the run log; stdout is reserved for reports"""
    level = LOG_CONFIG["verbose_level"] if verbose else LOG_CONFIG["level"]
    formatter = logging.Formatter(LOG_CONFIG["format"])
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(level)

    stream = logging.StreamHandler(sys.stderr)
    stream.setFormatter(formatter)
    root.addHandler(stream)
    try:
        file_handler = logging.FileHandler(LOG_CONFIG["file"], encoding="utf-8")
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)
    except OSError as exc:
        logger.warning("Run log unavailable (%s)", exc)


# ============================================================================
# COMMANDS
# ============================================================================

def _load_process(args) -> Tuple[str, object]:
    if args.named:
        return args.named, NAMED_PROCESSES[args.named]()
    if args.process:
        return str(args.process), DetProcess.from_json(read_json(args.process))
    if args.matrix:
        matrix = read_matrix_csv(args.matrix)
        n = matrix.shape[0].bit_length() - 1
        return str(args.matrix), ProcessVectorGeneral(n, matrix)
    raise PreconditionError("check needs one of --process, --matrix or --named")


def cmd_enum(cfg: RunConfig, args) -> Tuple[Dict, int]:
    n = cfg.n or 3
    processes = process_mod.enumerate_det(n, n_jobs=cfg.threads)
    path = cfg.catalog or CATALOG_DIR / f"processes_n{n}.jsonl"
    catalog = Catalog.open(path, n)
    added = catalog.merge(processes)
    report = {
        "n": n,
        "processes": len(processes),
        "classes": len(catalog),
        "new_classes": added,
        "orbit_total": catalog.total_vertices(),
        "dk_distribution": dk_distribution(processes),
        "catalog": str(path),
    }
    code = EXIT_OK if catalog.total_vertices() == len(processes) else EXIT_FAILED
    return report, code


def cmd_check(cfg: RunConfig, args) -> Tuple[Dict, int]:
    source, item = _load_process(args)
    if isinstance(item, DetProcess):
        consistent = is_consistent(item)
        report = {"source": source, "n": item.n, "consistent": consistent}
        if consistent:
            report.update({"dk": dk_class(item), "type": classify_type(item)})
    else:
        consistent = validate_vector(item)
        report = {"source": source, "n": item.n, "consistent": consistent,
                  "deterministic": item.is_deterministic()}
    return report, EXIT_OK if consistent else EXIT_FAILED


def cmd_dual(cfg: RunConfig, args) -> Tuple[Dict, int]:
    n = cfg.n or 2
    if n == 4:
        if cfg.catalog is None:
            raise PreconditionError("dual --n 4 checks sampled vertices and needs --catalog")
        catalog = Catalog.load(cfg.catalog, 4)
        report = check_sampled_duality([process_mod.to_matrix(f) for f in catalog.processes()])
        return report, EXIT_OK if report["passed"] else EXIT_FAILED
    report = check_duality(n)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAILED


def cmd_effect(cfg: RunConfig, args) -> Tuple[Dict, int]:
    if args.matrix is None:
        scan = agreement_scan(cfg.n or 3, samples=args.samples, seed=cfg.seed)
        return scan, EXIT_OK if not scan["disagreements"] else EXIT_FAILED

    matrix = read_matrix_csv(args.matrix)
    if all(v in (0, 1) for v in matrix.flat) and not args.probe:
        return classify(ZMatrix.from_matrix(matrix)).to_json(), EXIT_OK

    n = matrix.shape[0].bit_length() - 1
    witness = probe_fractional_vertex(ProcessVectorGeneral(n, matrix))
    return witness.to_json(), EXIT_OK


def cmd_discover(cfg: RunConfig, args) -> Tuple[Dict, int]:
    n = cfg.n or ILP_CONFIG["n_parties"]
    path = cfg.catalog or DEFAULT_CATALOG_PATH
    catalog = Catalog.open(path, n)
    seeds = [cfg.seed + k for k in range(cfg.threads)]
    logger.info("Sampling n=%d vertices with %d workers for %.0f s", n, len(seeds), cfg.seconds)

    if len(seeds) == 1:
        samples = [ilp_sample(seeds[0], cfg.seconds, args.objectives, n)]
    else:
        samples = Parallel(n_jobs=len(seeds))(
            delayed(ilp_sample)(seed, cfg.seconds, args.objectives, n) for seed in seeds
        )

    added = 0
    for sample in samples:
        added += catalog.merge(sample.processes)
    report = {
        "n": n,
        "catalog": str(path),
        "classes": len(catalog),
        "new_classes": added,
        "total_vertices": catalog.total_vertices(),
        "runs": [{"seed": s.seed, **s.stats} for s in samples],
        "summary": catalog.summary().to_dict(orient="records"),
    }
    return report, EXIT_OK


def cmd_structure(cfg: RunConfig, args) -> Tuple[List[Dict], int]:
    path = cfg.catalog or DEFAULT_CATALOG_PATH
    catalog = Catalog.load(path)
    entries = catalog.sorted_entries()
    census = structure_census([e.process(catalog.n) for e in entries], labels=[e.class_id for e in entries])
    counts = census["counts"]
    logger.info("Structure classes by type: %s", counts["by_type"])
    ok = counts["all_soc"] and not counts["type_mismatches"]
    return census["classes"], EXIT_OK if ok else EXIT_FAILED


def cmd_switch(cfg: RunConfig, args) -> Tuple[Dict, int]:
    report = switch_report()
    checks = ("consistent", "pattern_ok", "diag_nonneg", "support_matches_process", "contractions_ok")
    return report, EXIT_OK if all(report[k] for k in checks) else EXIT_FAILED


def cmd_certify(cfg: RunConfig, args) -> Tuple[Dict, int]:
    report = certify(preset=args.preset, reading=args.reading)
    ok = report.violated and report.claim3_ok
    return report.to_json(), EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "enum": cmd_enum,
    "check": cmd_check,
    "dual": cmd_dual,
    "effect": cmd_effect,
    "discover": cmd_discover,
    "structure": cmd_structure,
    "switch": cmd_switch,
    "certify": cmd_certify,
}


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="debug-level logging")
    common.add_argument("--seed", type=int, default=RANDOM_SEED)
    common.add_argument("--threads", type=int, default=None, help="worker cap (default: CF_THREADS)")
    common.add_argument("--seconds", type=float, default=ILP_CONFIG["default_seconds"])
    common.add_argument("--out", type=Path, default=None, help="write the JSON report here")

    parser = argparse.ArgumentParser(prog="cli.py", description="Causal polytope toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", parents=[common])
    p.add_argument("--n", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--catalog", type=Path)

    p = sub.add_parser("check", parents=[common])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--process", type=Path, help='JSON {"n": int, "x_of_a": [...]}')
    group.add_argument("--matrix", type=Path, help="CSV process matrix, rows a, columns x")
    group.add_argument("--named", choices=sorted(NAMED_PROCESSES))

    p = sub.add_parser("dual", parents=[common])
    p.add_argument("--n", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--catalog", type=Path, help="n=4 catalog of sampled vertices")

    p = sub.add_parser("effect", parents=[common])
    p.add_argument("--matrix", type=Path, help="CSV effect (0/1) or fractional process matrix")
    p.add_argument("--probe", action="store_true", help="always run the fine-tuning probe")
    p.add_argument("--n", type=int, choices=(1, 2, 3, 4), default=3)
    p.add_argument("--samples", type=int, default=EFFECT_CONFIG["random_samples"])

    p = sub.add_parser("discover", parents=[common])
    p.add_argument("--n", type=int, choices=(2, 3, 4), default=ILP_CONFIG["n_parties"])
    p.add_argument("--catalog", type=Path)
    p.add_argument("--objectives", type=int, default=None, help="objective cap per worker")

    p = sub.add_parser("structure", parents=[common])
    p.add_argument("--catalog", type=Path)

    sub.add_parser("switch", parents=[common])

    p = sub.add_parser("certify", parents=[common])
    p.add_argument("--preset", choices=sorted(MEASUREMENT_PRESETS), default=QUANTUM_CONFIG["measurement_preset"])
    p.add_argument("--reading", choices=I3_READINGS, default=QUANTUM_CONFIG["i3_reading"])

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    cfg = RunConfig.from_args(args)
    configure_logging(cfg.verbose)
    logger.debug("Run configuration: %s", asdict(cfg))

    try:
        report, code = COMMANDS[cfg.command](cfg, args)
    except (CatalogError, OSError, PreconditionError, MeasurementConfigError, BudgetExceededError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except CausalPolytopeError as exc:
        logger.error("Verified failure: %s", exc)
        counterexample = getattr(exc, "counterexample", None)
        if counterexample is not None:
            print(write_report({"error": str(exc), "counterexample": counterexample}, cfg.out))
        return EXIT_FAILED

    print(write_report(report, cfg.out))
    return code


if __name__ == "__main__":
    sys.exit(main())
