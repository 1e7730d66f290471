import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lckforge.exterior import Form, monomials_of_degree
from lckforge.model import CATALOG_NAMES, catalog, flat_model
from lckforge.scalars import GaussianRational

settings.register_profile("exact", derandomize=True, max_examples=40, deadline=None, print_blob=True)
settings.load_profile("exact")

REPO = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(params=CATALOG_NAMES)
def inoue(request):
    return catalog(request.param)


@pytest.fixture
def sm():
    return catalog("inoue_sm")


@pytest.fixture
def splus():
    return catalog("inoue_splus")


@pytest.fixture
def sminus():
    return catalog("inoue_sminus")


@pytest.fixture
def flat2():
    return flat_model(2)


# strategies ---------------------------------------------------------------

small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gaussians = st.builds(GaussianRational, small_fracs, small_fracs)
nonzero_gaussians = gaussians.filter(lambda z: not z.is_zero())
weights = st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2)])


def homogeneous_forms(n: int, k: int, max_terms: int = 4):
    monos = monomials_of_degree(n, k)
    return st.dictionaries(st.sampled_from(monos), gaussians, max_size=max_terms).map(Form)


def forms_any_degree(n: int):
    return st.integers(0, 2 * n).flatmap(lambda k: homogeneous_forms(n, k))


model_names = st.sampled_from(CATALOG_NAMES)


# acceptance report --------------------------------------------------------

ACCEPTANCE = {}


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> bool:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
