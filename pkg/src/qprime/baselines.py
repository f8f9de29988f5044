"""Stored regression baselines for measurements whose bounds carry no
explicit constants: character-sum oscillation ratios, large-sieve ratios and
the comparison-sieve gap.

Regenerate with ``python -m qprime.baselines --write``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .charsum import OscMode, oscillation_suite
from .experiments.functionals import SequenceSpec, pi_compare
from .modroots import large_sieve_ratio
from .qform import QuadForm

OSC_DISCS = (-4, 5)
OSC_MODES = (OscMode.LN, OscMode.TWISTED, OscMode.LMN)
SIEVE_FORMS = ("1,0,1", "1,1,1", "1,0,-2")
SIEVE_GRID = tuple(2**k for k in range(6, 13))
CALIBRATION_SEEDS = tuple(range(10))
GAP_CASES = (("1,0,1", 10**6), ("1,0,-2", 10**6))

_DATA = "data/baselines.json"
_PRODUCERS = ("charsum.py", "modroots.py", "experiments/functionals.py", "baselines.py")


def producer_hash() -> str:
    root = Path(__file__).parent
    h = hashlib.sha256()
    for name in _PRODUCERS:
        h.update((root / name).read_bytes())
    return h.hexdigest()[:16]


def random_alpha(N: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(N) + 1j * rng.standard_normal(N)


def large_sieve_grid(F: QuadForm, seeds: tuple[int, ...]) -> list[tuple[int, int, int, float]]:
    """(D, N, seed, ratio) over the D, N grid."""
    out = []
    for D in SIEVE_GRID:
        for N in SIEVE_GRID:
            for s in seeds:
                out.append((D, N, s, large_sieve_ratio(F, D, N, random_alpha(N, s))))
    return out


def oscillation_ratios(disc: int, mode: OscMode) -> list[list[float]]:
    return [[r.scale, r.ratio] for r in oscillation_suite(disc, mode)]


def compute() -> dict:
    osc = {str(D): {m.value: oscillation_ratios(D, m) for m in OSC_MODES} for D in OSC_DISCS}
    sieve = {}
    for f in SIEVE_FORMS:
        ratios = [r for *_, r in large_sieve_grid(QuadForm.parse(f), CALIBRATION_SEEDS)]
        sieve[f] = max(ratios)
    gaps = {}
    for f, X in GAP_CASES:
        pc = pi_compare(QuadForm.parse(f), X)
        gaps[f"{f}@{X}"] = pc.normalized(with_loglog=True)[0]
    return {
        "version": __version__,
        "producer": producer_hash(),
        "oscillation": osc,
        "large_sieve_constant": sieve,
        "sieve_gap": gaps,
    }


def load() -> dict:
    return json.loads(resources.files("qprime").joinpath(_DATA).read_text())


def within(value: float, base: float, rel: float) -> bool:
    return math.isclose(value, base, rel_tol=rel, abs_tol=0.0)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--write", action="store_true", help="overwrite the stored file")
    args = ap.parse_args()
    data = compute()
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    if args.write:
        (Path(__file__).parent / _DATA).write_text(text)
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
