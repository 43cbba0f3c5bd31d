"""End-to-end acceptance checks; each test records one PASS/FAIL summary line."""

import time
from functools import cache

import numpy as np
import pytest

from localdiff import cli, prover
from localdiff.construction import build_baseline, build_pn, build_truncated
from localdiff.core import IntegerSet, SubsetMask, threshold_holds
from localdiff.diffset import diff_count, distance_count
from localdiff.formats import write_set
from localdiff.verifier import (
    check_decomposition,
    min_subset_bnb,
    verify_all_k,
    verify_exhaustive,
)

pytestmark = pytest.mark.acceptance

build_pn_cached = cache(build_pn)


def test_global_count(record):
    counts, elapsed_12 = [], None
    for j in range(13):
        start = time.perf_counter()
        counts.append(diff_count(build_pn(j)))
        if j == 12:
            elapsed_12 = time.perf_counter() - start
    exact = counts == [3**j for j in range(13)]
    record(1, exact and elapsed_12 < 60,
           f"|P_j - P_j| = 3^j for j=0..12: {exact}; j=12 took {elapsed_12:.2f}s (< 60s)")


def test_local_property_exhaustive(record):
    failures = []
    for j in range(4):
        failures += [(j, r.k) for r in verify_all_k(build_pn(j)) if not r.holds]
    start = time.perf_counter()
    sweep = verify_all_k(build_pn(4))
    elapsed = time.perf_counter() - start
    failures += [(4, r.k) for r in sweep if not r.holds]
    subsets = sum(r.subsets_checked for r in sweep)
    record(2, not failures and subsets == 2**16 - 1 and elapsed < 120,
           f"every k on P_0..P_4 holds (failures={failures}); P_4 sweep checked "
           f"{subsets} non-empty subsets in {elapsed:.2f}s (< 120s)")


def test_equality_witnesses(record):
    pair = [verify_exhaustive(build_pn(j), 2) for j in range(1, 5)]
    full = verify_exhaustive(build_pn(2), 4)
    ok = (all(r.min_diff == 3 and r.holds and r.bound.is_point() for r in pair)
          and full.min_diff == 9 and full.holds and full.bound.is_point() and full.bound.contains(9))
    record(3, ok, f"k=2 min_diff={[r.min_diff for r in pair]} (bound 3 exact); "
                  f"P_2 k=4 min_diff={full.min_diff} (bound 9 exact)")


def test_baseline_contrast(record, tmp_path, capsys):
    path = tmp_path / "ap16.txt"
    write_set(path, build_baseline("arithmetic_progression", 16))
    code = cli.main(["verify", str(path), "--k", "4"])
    err = capsys.readouterr().err
    report = verify_exhaustive(build_baseline("arithmetic_progression", 16), 4)
    witness = [report.witness.indices()[i] for i in range(4)]
    gaps = set(np.diff(witness).tolist())
    ok = code == 2 and report.min_diff == 7 and not report.holds and len(gaps) == 1 and "witness=" in err
    record(4, ok, f"AP n=16 k=4: min_diff={report.min_diff} < 9, exit code {code}, "
                  f"witness {witness} is a 4-term AP")


def test_bnb_oracle_equivalence(record):
    discrepancies, compared = [], 0
    P4 = build_pn(4)
    for k in range(1, 17):
        compared += 1
        if min_subset_bnb(P4, k).min_diff != verify_exhaustive(P4, k).min_diff:
            discrepancies.append(("P4", k))
    rng = np.random.default_rng(20240517)
    for trial in range(50):
        m = int(rng.integers(4, 19))
        S = IntegerSet(tuple(sorted(rng.choice(200, m, replace=False).tolist())))
        for k in range(1, m + 1):
            compared += 1
            bnb = min_subset_bnb(S, k)
            if not bnb.complete or bnb.min_diff != verify_exhaustive(S, k).min_diff:
                discrepancies.append((S.ints, k))
    record(5, not discrepancies,
           f"{compared} (set, k) pairs compared over P_4 and 50 random integer sets; "
           f"discrepancies={len(discrepancies)}")


def test_proof_instrumentation(record):
    rng = np.random.default_rng(77)
    memos = {n: {} for n in range(1, 9)}
    failures, nodes = 0, 0
    for trial in range(10_000):
        n = int(rng.integers(1, 9))
        size = 1 << n
        mask = 0
        while not mask:
            mask = int.from_bytes(rng.bytes((size + 7) // 8), "little") & ((1 << size) - 1)
        try:
            nodes += check_decomposition(build_pn_cached(n), SubsetMask(mask, size), memos[n])
        except AssertionError:
            failures += 1
    record(6, failures == 0,
           f"10000 random subsets of P_1..P_8: {nodes} new decomposition nodes checked, "
           f"failures={failures}")


def test_analytic_certificates(record, tmp_path, capsys):
    cert_path = tmp_path / "f1.cert"
    start = time.perf_counter()
    code_f1 = cli.main(["prove", "f1", "--cert", str(cert_path)])
    elapsed = time.perf_counter() - start
    cert = prover.Certificate.from_text(cert_path.read_text())
    methods = {b.method for b in cert.boxes}
    taylor = [b for b in cert.boxes if b.method == "taylor_exclusion"]
    premises = {p.name: p.holds for p in cert.premises}
    f1_ok = (code_f1 == 0 and cert.ok and not cert.gaps()
             and cert.domain == (prover.F1_DOMAIN[0], prover.F1_DOMAIN[1])
             and methods == {"interval_positive", "taylor_exclusion"}
             and min(b.lo for b in taylor) == prover.TAYLOR_ZONE[0]
             and max(b.hi for b in taylor) == prover.TAYLOR_ZONE[1]
             and all(premises.values()) and elapsed < 60
             and prover.validate_certificate(cert).ok)
    capsys.readouterr()

    code_dr = cli.main(["prove", "domain-reduction"])
    dr_out = capsys.readouterr().out
    margin = prover.domain_reduction_margin()
    code_grid = cli.main(["prove", "tight-grid", "--max", "30"])
    grid_out = capsys.readouterr().out
    ok = (f1_ok and code_dr == 0 and margin.is_positive() and "margin=[" in dr_out
          and code_grid == 0 and "violations=0" in grid_out)
    record(7, ok, f"f1 certificate: {len(cert.boxes)} boxes, gap-free, {elapsed:.2f}s; "
                  f"domain-reduction margin lo={float(margin.lo):.6f} > 0; "
                  f"tight-grid max=30 exit {code_grid} with zero violations")


def test_truncation_corollary(record):
    rng = np.random.default_rng(4096)
    pool = [n for n in range(3, 4097) if n & (n - 1)]
    chosen = sorted({3, 5, 2049, 4095} | set(rng.choice(pool, 46, replace=False).tolist()))
    while len(chosen) < 50:
        chosen = sorted(set(chosen) | {int(rng.choice(pool))})
    bad = [n for n in chosen if threshold_holds(diff_count(build_truncated(n)), n, factor=3)]
    record(8, len(chosen) == 50 and not bad,
           f"{len(chosen)} non-power-of-two n in [3, 4095]: |A - A| < 3 n^log2(3) "
           f"for all (exceptions={bad})")


def test_distance_bridge(record):
    got = [distance_count(build_pn(j)) for j in range(13)]
    record(9, got == [(3**j - 1) // 2 for j in range(13)],
           f"distance_count(P_j) = (3^j - 1)/2 for j=0..12: {got[-1]} at j=12")
