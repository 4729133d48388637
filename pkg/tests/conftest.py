import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from faultchain.corpus import GoldenCase, motivating_example
from faultchain.pipeline import TraceResult, trace_case


@dataclass
class GoldenFixture:
    case: GoldenCase
    traced: TraceResult

    @property
    def coverage(self):
        return self.traced.coverage

    @property
    def slices(self):
        return self.traced.slices

    @property
    def pdg(self):
        return self.traced.pdg


@pytest.fixture(scope="session")
def golden() -> GoldenFixture:
    case = motivating_example()
    traced = trace_case(case.source, case.make_suite())
    return GoldenFixture(case=case, traced=traced)
