import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EQUAL_FIELDS = (0, 2, 3, 5)
PRIMES = (2, 3, 5, 7)


def exponents(max_den=4, lo=-6, hi=6):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den), st.integers(1, max_den),
    )


@st.composite
def coeff_dicts(draw, p, max_terms=5, max_den=4, nonzero=False):
    """``{exponent: coefficient}`` with non-zero base coefficients."""
    gs = draw(st.lists(exponents(max_den), min_size=1 if nonzero else 0,
                       max_size=max_terms, unique=True))
    out = {}
    for g in gs:
        if p:
            out[g] = draw(st.integers(1, p - 1))
        else:
            out[g] = Fraction(draw(st.integers(-9, 9).filter(bool)), draw(st.integers(1, 5)))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
