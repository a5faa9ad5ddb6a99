#!/usr/bin/env python3
"""
Acceptance run for qclaw.
Runs every verification check on every bundled seed and prints a summary.
"""

import sys
import time
from typing import List, Tuple

from qclaw.cli import setup_logging
from qclaw.grading import grading_lattice
from qclaw.schemas import VerificationReport
from qclaw.seedcore import QuantumSeed
from qclaw.seedfile import BUNDLED_SEEDS, load_bundled
from qclaw.verify import (
    graded_dimension_report,
    merge_reports,
    specialization_check,
    verify_domain_property,
    verify_homogeneity,
    verify_laurent,
    verify_mutation_invariants,
    verify_power_identities,
    verify_prop_key,
)

MUTATION_SAMPLES = 200
LAURENT_DEPTH = 6
SPECIALIZATION_DEPTH = {"rank1_frozen": 4, "a2": 8, "a2_principal": 8, "a3_principal": 6}
L_MAX = 4
PROPKEY_SAMPLES = 100
DOMAIN_SAMPLES = 500
RNG_SEED = 0
GRADED_SEED = "a2_principal"
GRADED_D = [1, 0, 0, -1]
GRADED_RANGE = range(-4, 5)
GRADED_DEPTH = 6


def print_banner():
    print("=" * 60)
    print("🧮 QCLAW - ACCEPTANCE RUN")
    print("=" * 60)
    print(f"📦 Seeds: {', '.join(BUNDLED_SEEDS)}")
    print(f"🎲 RNG seed: {RNG_SEED}")
    print("=" * 60)
    print()


def run_seed(name: str) -> List[VerificationReport]:
    seed_file, pair = load_bundled(name)
    seed = QuantumSeed.initial(pair)
    directions = range(1, pair.n_ex + 1)
    print(f"🔍 {name}: m={pair.m}, n_ex={pair.n_ex}, d={pair.d}")

    lattice = grading_lattice(pair.b_tilde)
    print(f"   grading lattice rank {lattice.rank}: {[list(v) for v in lattice.basis]}")

    reports = [
        verify_mutation_invariants(pair, MUTATION_SAMPLES, RNG_SEED),
        verify_laurent(pair, LAURENT_DEPTH),
        specialization_check(pair, SPECIALIZATION_DEPTH[name]),
        merge_reports("powerids", [verify_power_identities(seed, k, L_MAX) for k in directions]),
        merge_reports("propkey", [verify_prop_key(seed, k, PROPKEY_SAMPLES, RNG_SEED) for k in directions]),
        verify_domain_property(pair, DOMAIN_SAMPLES, RNG_SEED),
    ]
    d = seed_file.grading if seed_file.grading is not None else (list(lattice.basis[0]) if lattice.basis else None)
    if d is not None:
        reports.append(verify_homogeneity(pair, d, LAURENT_DEPTH))
    if name == GRADED_SEED:
        reports.append(graded_dimension_report(pair, GRADED_D, GRADED_RANGE, GRADED_DEPTH))
    return reports


def check_determinism() -> Tuple[bool, str]:
    _, pair = load_bundled("a3_principal")
    seed = QuantumSeed.initial(pair)
    first = verify_prop_key(seed, 2, 20, RNG_SEED, timing=False).to_json()
    second = verify_prop_key(seed, 2, 20, RNG_SEED, timing=False).to_json()
    return first == second, "repeated propkey run is byte-identical"


def main() -> int:
    setup_logging()
    print_banner()
    started = time.perf_counter()
    failed = 0
    for name in BUNDLED_SEEDS:
        for report in run_seed(name):
            mark = "✅" if report.passed else "❌"
            print(f"   {mark} {report.check_name}: {report.cases_run} cases")
            if not report.passed:
                failed += 1
                for witness in report.witnesses[:3]:
                    print(f"      witness: {witness}")
        print()

    same, label = check_determinism()
    print(f"{'✅' if same else '❌'} determinism: {label}")
    failed += 0 if same else 1

    print()
    print("=" * 60)
    elapsed = time.perf_counter() - started
    if failed:
        print(f"❌ {failed} check(s) failed ({elapsed:.1f}s)")
    else:
        print(f"🎉 All checks passed ({elapsed:.1f}s)")
    print("=" * 60)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
