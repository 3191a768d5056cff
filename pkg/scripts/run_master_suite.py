"""Verify every registered identity on sampled parameter sets and print a summary table.

    python3 scripts/run_master_suite.py --seed 42 --samples 100 --out suite.jsonl
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from kampe.cli import make_record
from kampe.identities import IdentityId, SamplerConfig, sample_params


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    samples: int = 100
    margin: Fraction = Fraction(1, 4)
    tol: float = 1e-9
    out: str | None = None


def run(cfg: SuiteConfig) -> list[dict]:
    sampler = SamplerConfig(margin=cfg.margin)
    rows, records = [], []
    for identity in IdentityId:
        t0 = time.perf_counter()
        recs = [make_record(identity, p, cfg.tol) for p in sample_params(identity, cfg.seed, cfg.samples, sampler)]
        records += recs
        errs = [r["rel_err"] for r in recs if r["rel_err"] is not None]
        rows.append(
            {
                "identity": identity.value,
                "ok": sum(r["status"] == "ok" and r["rel_err"] <= cfg.tol for r in recs),
                "total": len(recs),
                "exact": sum(isinstance(r["lhs"], str) and isinstance(r["rhs"], str) for r in recs),
                "max_rel_err": max(errs, default=float("nan")),
                "seconds": time.perf_counter() - t0,
            }
        )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(r) + "\n")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=SuiteConfig.seed)
    ap.add_argument("--samples", type=int, default=SuiteConfig.samples)
    ap.add_argument("--margin", type=Fraction, default=SuiteConfig.margin)
    ap.add_argument("--tol", type=float, default=SuiteConfig.tol)
    ap.add_argument("--out")
    cfg = SuiteConfig(**vars(ap.parse_args()))

    rows = run(cfg)
    print(f"config: {json.dumps(asdict(cfg), default=str)}")
    print(f"{'identity':<9} {'pass':>9} {'exact':>6} {'max rel err':>12} {'time s':>7}")
    for r in rows:
        print(f"{r['identity']:<9} {r['ok']:>4}/{r['total']:<4} {r['exact']:>6} {r['max_rel_err']:>12.2e} {r['seconds']:>7.2f}")
    failed = sum(r["total"] - r["ok"] for r in rows)
    print(f"total failures: {failed}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
