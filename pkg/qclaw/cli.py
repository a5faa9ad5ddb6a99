"""
Command-line entry point.

Exit codes: 0 when everything checked passes, 1 on a check failure, 2 on bad input.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from .config import get_settings
from .errors import CheckFailure, InputError, QclawError
from .grading import grading_lattice, is_in_lattice
from .laurent import default_names
from .schemas import (
    GradingResponse,
    GraphResponse,
    MutateResponse,
    SeedFile,
    SpecializeResponse,
    ValidateResponse,
    VariableEntry,
)
from .seedcore import (
    ClassicalSeed,
    CompatiblePair,
    QuantumSeed,
    enumerate_exchange_graph,
    format_path,
    mutate_classical_seed,
    mutate_quantum_seed,
    parse_path,
)
from .seedfile import load_seed_file
from .verify import (
    graded_dimension_report,
    merge_reports,
    sample_upper_membership,
    specialization_check,
    verify_domain_property,
    verify_homogeneity,
    verify_laurent,
    verify_mutation_invariants,
    verify_power_identities,
    verify_prop_key,
)

logger = logging.getLogger(__name__)

CHECKS = ("laurent", "propkey", "powerids", "specialization", "graded", "homogeneity", "mutation", "domain", "upper")


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _base_names(seed_file: SeedFile, m: int) -> List[str]:
    return list(seed_file.names) if seed_file.names else default_names(m)


def _labels(names: Sequence[str], path: Sequence[int]) -> List[str]:
    """x_i gets one prime per occurrence of i in the (reduced) path."""
    return [name + "'" * list(path).count(i) for i, name in enumerate(names, start=1)]


def _walk(pair: CompatiblePair, path: Sequence[int], classical: bool):
    seed = ClassicalSeed.initial(pair.b_tilde) if classical else QuantumSeed.initial(pair)
    step = mutate_classical_seed if classical else mutate_quantum_seed
    for k in path:
        seed = step(seed, k)
    return seed


def parse_vector(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise InputError(f"malformed integer vector {text!r}") from e


def _grading_arg(text: Optional[str], seed_file: SeedFile) -> Optional[List[int]]:
    if text:
        return parse_vector(text)
    return list(seed_file.grading) if seed_file.grading is not None else None


def _print(args: argparse.Namespace, model, lines: Sequence[str]) -> None:
    if args.json:
        print(model.model_dump_json(indent=2))
    else:
        for line in lines:
            print(line)


def cmd_validate(args: argparse.Namespace) -> int:
    seed_file, pair = load_seed_file(args.file)
    response = ValidateResponse(m=pair.m, n_ex=pair.n_ex, d=list(pair.d), description=seed_file.description)
    _print(args, response, [f"d=({','.join(str(x) for x in pair.d)})"])
    return 0


def cmd_mutate(args: argparse.Namespace) -> int:
    seed_file, pair = load_seed_file(args.file)
    seed = _walk(pair, parse_path(args.seq), args.classical)
    names = _base_names(seed_file, pair.m)
    labels = _labels(names, seed.path)
    entries = []
    for i, (label, var) in enumerate(zip(labels, seed.vars), start=1):
        text = var.to_text(names) if (args.classical or seed_file.names) else str(var)
        entries.append(VariableEntry(index=i, label=label, value=text))
    response = MutateResponse(
        path=format_path(seed.path),
        picture="classical" if args.classical else "quantum",
        variables=entries,
        b_tilde=[list(r) for r in (seed.b_tilde if args.classical else seed.pair.b_tilde)],
    )
    _print(args, response, [f"{e.label} = {e.value}" for e in entries])
    return 0


def cmd_specialize(args: argparse.Namespace) -> int:
    seed_file, pair = load_seed_file(args.file)
    path = parse_path(args.seq)
    quantum = _walk(pair, path, classical=False)
    classical = _walk(pair, path, classical=True)
    names = _base_names(seed_file, pair.m)
    images = [v.specialize() for v in quantum.vars]
    entries = [
        VariableEntry(index=i, label=label, value=image.to_text(names))
        for i, (label, image) in enumerate(zip(_labels(names, quantum.path), images), start=1)
    ]
    matches = all(a == b for a, b in zip(images, classical.vars))
    response = SpecializeResponse(path=format_path(quantum.path), variables=entries, matches_classical=matches)
    lines = [f"{e.label} = {e.value}" for e in entries]
    lines.append("matches classical mutation" if matches else "DOES NOT match classical mutation")
    _print(args, response, lines)
    return 0 if matches else 1


def cmd_grading(args: argparse.Namespace) -> int:
    seed_file, pair = load_seed_file(args.file)
    lattice = grading_lattice(pair.b_tilde)
    d = _grading_arg(args.grading, seed_file)
    inside = is_in_lattice(d, pair.b_tilde) if d is not None else None
    response = GradingResponse(
        basis=[list(v) for v in lattice.basis], rank=lattice.rank, grading=d, grading_in_lattice=inside
    )
    lines = [f"rank {lattice.rank}"] + ["(" + ",".join(str(x) for x in v) + ")" for v in lattice.basis]
    if d is not None:
        lines.append(f"d=({','.join(str(x) for x in d)}) {'is' if inside else 'is NOT'} a grading vector")
    _print(args, response, lines)
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    _, pair = load_seed_file(args.file)
    graph = enumerate_exchange_graph(pair, args.max_depth, quantum=not args.classical)
    response = GraphResponse(
        picture="classical" if args.classical else "quantum",
        max_depth=args.max_depth,
        clusters=graph.cluster_count,
        variables=graph.variable_count,
        complete=graph.complete,
    )
    lines = [
        f"clusters: {graph.cluster_count}",
        f"variables: {graph.variable_count}",
        f"finite type detected: {'yes' if graph.complete else 'no (truncated)'}",
    ]
    _print(args, response, lines)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    seed_file, pair = load_seed_file(args.file)
    settings = get_settings()
    samples = args.samples if args.samples is not None else settings.samples
    rng_seed = args.rng_seed if args.rng_seed is not None else settings.rng_seed
    l_max = args.l_max if args.l_max is not None else settings.l_max
    timing = True if args.timing else None
    directions = [args.k] if args.k else list(range(1, pair.n_ex + 1))

    check = args.check
    if check in ("propkey", "powerids", "upper"):
        seed = _walk(pair, parse_path(args.seq), classical=False)
        if check == "upper":
            report = sample_upper_membership(seed, samples, rng_seed, timing)
        elif check == "powerids":
            report = merge_reports(check, [verify_power_identities(seed, k, l_max, timing) for k in directions])
        else:
            report = merge_reports(check, [verify_prop_key(seed, k, samples, rng_seed, timing) for k in directions])
    elif check == "laurent":
        report = verify_laurent(pair, args.depth, timing)
    elif check == "specialization":
        report = specialization_check(pair, args.depth, timing)
    elif check == "mutation":
        report = verify_mutation_invariants(pair, samples, rng_seed, timing=timing)
    elif check == "domain":
        report = verify_domain_property(pair, samples, rng_seed, timing)
    else:
        d = _grading_arg(args.grading, seed_file)
        if d is None:
            raise InputError(f"--check {check} needs --grading or a 'grading' entry in the seed file")
        if check == "homogeneity":
            report = verify_homogeneity(pair, d, args.depth, timing)
        else:
            g_range = range(args.g_min, args.g_max + 1)
            report = graded_dimension_report(pair, d, g_range, args.depth, args.max_factors, timing)
    print(report.to_json())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qclaw", description="Quantum cluster seeds, gradings and q = 1 checks")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_command(name: str, help_text: str, json_flag: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="seed file (JSON)")
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = seed_command("validate", "check compatibility and print d")
    p.set_defaults(handler=cmd_validate)

    p = seed_command("mutate", "print the variables reached along a mutation sequence")
    p.add_argument("--seq", default="", help="comma-separated 1-based directions, e.g. 1,2,1")
    p.add_argument("--classical", action="store_true", help="commutative cluster variables instead of quantum ones")
    p.set_defaults(handler=cmd_mutate)

    p = seed_command("specialize", "specialize quantum variables at q = 1")
    p.add_argument("--seq", default="")
    p.set_defaults(handler=cmd_specialize)

    p = seed_command("grading", "print a basis of the grading lattice")
    p.add_argument("--grading", help="comma-separated vector to test for membership")
    p.set_defaults(handler=cmd_grading)

    p = seed_command("graph", "enumerate the exchange graph")
    p.add_argument("--max-depth", type=int, default=6)
    p.add_argument("--classical", action="store_true")
    p.set_defaults(handler=cmd_graph)

    p = seed_command("verify", "run a verification check and print its JSON report", json_flag=False)
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--samples", type=int)
    p.add_argument("--rng-seed", type=int)
    p.add_argument("--l-max", type=int)
    p.add_argument("--k", type=int, help="single exchangeable direction (default: all)")
    p.add_argument("--seq", default="", help="seed to check, as a mutation sequence from the file's seed")
    p.add_argument("--grading", help="comma-separated grading vector")
    p.add_argument("--g-min", type=int, default=-4)
    p.add_argument("--g-max", type=int, default=4)
    p.add_argument("--max-factors", type=int, default=2)
    p.add_argument("--timing", action="store_true", help="record wall-clock millis in the report")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.handler(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CheckFailure as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except QclawError as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
