import gmpy2
import pytest

from polynewt.xprec import Complex

# one line per acceptance criterion, echoed after the run (capture-proof)
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _mpfr_precision():
    """Give every test a generous working precision for the gmpy2 oracle."""
    saved = gmpy2.get_context().copy()
    gmpy2.set_context(gmpy2.context(precision=400))
    yield
    gmpy2.set_context(saved)


def to_mpfr(x):
    """Exact sum of a scalar's binary64 components as an mpfr value."""
    if isinstance(x, (int, float)):
        return gmpy2.mpfr(x)
    return sum((gmpy2.mpfr(c) for c in x.comps), gmpy2.mpfr(0))


def to_mpc(x):
    if isinstance(x, Complex):
        return gmpy2.mpc(to_mpfr(x.re), to_mpfr(x.im))
    return gmpy2.mpc(to_mpfr(x))


def rel_err(got, ref):
    """|got - ref| / |ref| in mpfr, with a zero-reference fallback."""
    if ref == 0:
        return abs(got)
    return abs((got - ref) / ref)
