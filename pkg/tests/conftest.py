from hypothesis import strategies as st

from pyramidfe.ratfun import RatFun

# Filled by test_acceptance; printed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def ratfuns(max_exp=3, max_c=5, max_terms=4, min_c=0):
    keys = st.tuples(
        st.integers(0, max_exp), st.integers(0, max_exp), st.integers(min_c, max_c)
    )
    return st.dictionaries(keys, fractions, max_size=max_terms).map(RatFun)
