"""Scan random finitely supported circle measures and tally the verdicts.

Single-atom and antipodal measures are always certified; this script probes
general position, where the necessary-measure condition usually refutes.

    python3 scripts/random_measure_scan.py --samples 40 --seed 1
"""
import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from cauchydual import (CertificateConfig, CircleMeasure, measure_to_symbol,
                        run_certificates)


@dataclass(frozen=True)
class ScanConfig:
    samples: int = 40
    seed: int = 0
    min_atoms: int = 1
    max_atoms: int = 4
    min_weight: float = 0.1
    max_weight: float = 5.0
    # clustered atoms make the interpolation Gram ill-conditioned and the
    # pipeline rejects the output; keep samples well separated
    min_gap: float = 0.3
    levels: int = 12
    trunc: int = 40


def draw_measure(rng: np.random.Generator, cfg: ScanConfig) -> CircleMeasure:
    k = int(rng.integers(cfg.min_atoms, cfg.max_atoms + 1))
    while True:
        thetas = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=k))
        gaps = np.diff(np.concatenate([thetas, [thetas[0] + 2.0 * np.pi]]))
        if k == 1 or gaps.min() > cfg.min_gap:
            break
    weights = np.exp(rng.uniform(np.log(cfg.min_weight),
                                 np.log(cfg.max_weight), size=k))
    return CircleMeasure(tuple(thetas), tuple(weights))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=ScanConfig.samples)
    parser.add_argument("--seed", type=int, default=ScanConfig.seed)
    parser.add_argument("--max-atoms", type=int, default=ScanConfig.max_atoms)
    args = parser.parse_args()
    cfg = ScanConfig(samples=args.samples, seed=args.seed,
                     max_atoms=args.max_atoms)

    rng = np.random.default_rng(cfg.seed)
    ccfg = CertificateConfig(levels=cfg.levels, trunc=cfg.trunc)
    tally = Counter()
    by_size = Counter()
    for i in range(cfg.samples):
        mu = draw_measure(rng, cfg)
        try:
            report = run_certificates(measure_to_symbol(mu), ccfg)
        except (ValueError, RuntimeError) as exc:
            tally["rejected"] += 1
            by_size[(mu.size, "rejected")] += 1
            print(f"[{i:3d}] k={mu.size} ! rejected: {exc}")
            continue
        tally[report.verdict] += 1
        by_size[(mu.size, report.verdict)] += 1
        marker = {"CertifiedSubnormal": ".", "RefutedAtLevel": "x"}.get(
            report.verdict, "?")
        print(f"[{i:3d}] k={mu.size} {marker} {report.verdict:24s} "
              f"orth={report.orth_residual:.2e} "
              f"nec_worst={report.necessary.worst_violation:.2e}")

    print("\nverdicts:")
    for verdict, count in sorted(tally.items()):
        print(f"  {verdict}: {count}")
    print("by atom count:")
    for (k, verdict), count in sorted(by_size.items()):
        print(f"  k={k} {verdict}: {count}")


if __name__ == "__main__":
    main()
