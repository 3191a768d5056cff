"""Accuracy and cost of unit-argument summation as the convergence margin shrinks.

Uses the one-parameter family d = 2, a = b = c = a' = b' = c' = 1, e' = e - 1,
whose value (e - 1)/(e - 2) is known in closed form; the two margins are
e - 1 and e - 2.

    python3 scripts/convergence_study.py --margins 0.25 0.5 1 2 4
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from kampe.errors import NoConvergence
from kampe.kdf import KdFParams, eval_kdf


@dataclass(frozen=True)
class StudyConfig:
    margins: tuple[Fraction, ...] = field(default_factory=lambda: tuple(Fraction(k, 4) for k in (1, 2, 4, 8, 16)))
    tol: float = 1e-14
    diagonal_tol: float = 1e-8
    max_diagonals: int = 20_000


def family(margin: Fraction) -> tuple[KdFParams, Fraction]:
    e = 2 + margin
    p = KdFParams(a=1, b=1, c=1, e=e, a_p=1, b_p=1, c_p=1, e_p=e - 1, d=2)
    return p, (e - 1) / (e - 2)


def timed(fn):
    t0 = time.perf_counter()
    try:
        v, done = fn(), True
    except NoConvergence as exc:
        v, done = exc.partial, False
    return v, done, time.perf_counter() - t0


def run(cfg: StudyConfig) -> list[dict]:
    rows = []
    for margin in cfg.margins:
        p, exact = family(margin)
        row = {"margin": margin, "exact": float(exact)}
        for label, fn in (
            ("auto", lambda: eval_kdf(p, cfg.tol)),
            ("diagonal", lambda: eval_kdf(p, cfg.diagonal_tol, cfg.max_diagonals, method="diagonal")),
        ):
            v, done, secs = timed(fn)
            if v is None:
                row[label] = None
                continue
            err = abs(complex(v) - float(exact)) / float(exact)
            row[label] = {"rel_err": err, "est": v.abs_err / float(exact), "terms": v.terms, "seconds": secs, "done": done}
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--margins", type=Fraction, nargs="+")
    ap.add_argument("--tol", type=float, default=StudyConfig.tol)
    ap.add_argument("--diagonal-tol", type=float, default=StudyConfig.diagonal_tol)
    args = ap.parse_args()
    kw = {"tol": args.tol, "diagonal_tol": args.diagonal_tol}
    if args.margins:
        kw["margins"] = tuple(args.margins)
    rows = run(StudyConfig(**kw))

    print(f"{'margin':>7} | {'auto rel err':>12} {'est':>9} {'terms':>8} {'s':>6} | {'diag rel err':>12} {'est':>9} {'terms':>8} {'s':>6}")
    for row in rows:
        cells = [f"{float(row['margin']):>7.3f}"]
        for label in ("auto", "diagonal"):
            r = row[label]
            if r is None:
                cells.append(f"{'no result':>40}")
            else:
                cells.append(f"{r['rel_err']:>12.2e} {r['est']:>9.1e} {r['terms']:>8} {r['seconds']:>6.2f}" + (" " if r["done"] else "*"))
        print(" | ".join(cells))
    print("* stopped at the term budget; value is the partial sum")


if __name__ == "__main__":
    main()
