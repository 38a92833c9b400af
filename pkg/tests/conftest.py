import sys
import time
from pathlib import Path
from types import SimpleNamespace

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from projpoly.pipeline import analyze_system, construct_system, verify_system

# The desk-scale grid every geometric claim is exercised on.
GRID = [(4, 2), (6, 2), (8, 2), (4, 3), (6, 3), (4, 4)]

_cache: dict[tuple[int, int], SimpleNamespace] = {}


def run_case(n: int, r: int) -> SimpleNamespace:
    """Construct, verify, and analyze one (n, r) case; cached per session."""
    if (n, r) not in _cache:
        start = time.monotonic()
        system = construct_system(n, r)
        verification = verify_system(system)
        analysis = analyze_system(system)
        _cache[(n, r)] = SimpleNamespace(
            system=system,
            verify=verification,
            analyze=analysis,
            seconds=time.monotonic() - start,
        )
    return _cache[(n, r)]


@pytest.fixture(scope="session")
def grid_case():
    return run_case
