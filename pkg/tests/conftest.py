import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from bilattice.scalar import ExactScalar  # noqa: E402

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def gaussian(draw, allow_imaginary=True):
    im = draw(fractions) if allow_imaginary else 0
    return ExactScalar(draw(fractions), im)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number].line())
