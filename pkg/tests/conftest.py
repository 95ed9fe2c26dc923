from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import upsetkit as uk
from upsetkit.bounds import auto_exact_method
from upsetkit.expectation import cached_q
from upsetkit.measure import critical_probability
from upsetkit.structure import DIMENSION_MINIMALS_CAP, cached_dim, max_nonempty_sigma_index


@dataclass(frozen=True)
class InstanceResult:
    name: str
    upper: uk.UpperSet
    q: float
    p_c: float
    dim_unrestricted: int | None
    dim_within_family: int | None
    sigma_top: int  # largest k with sigma_k nonempty


@pytest.fixture(scope="session")
def battery():
    return uk.builtin_battery()


@pytest.fixture(scope="session")
def battery_results(battery):
    """All battery quantities, with the q + p_c wall time recorded."""
    t0 = time.perf_counter()
    q_pc = [
        (cached_q(f), critical_probability(f, 1e-9, auto_exact_method(f)).p_c)
        for _, f in battery
    ]
    q_pc_seconds = time.perf_counter() - t0
    results = []
    for (name, f), (q, p_c) in zip(battery, q_pc):
        small = len(f.minimals) <= DIMENSION_MINIMALS_CAP
        results.append(
            InstanceResult(
                name=name,
                upper=f,
                q=q,
                p_c=p_c,
                dim_unrestricted=cached_dim(f, "unrestricted") if small else None,
                dim_within_family=cached_dim(f, "within_family") if small else None,
                sigma_top=max_nonempty_sigma_index(f),
            )
        )
    return results, q_pc_seconds
