import pytest

from vertex_orbifold.suites import SuiteConfig, run_suite

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        # a criterion passes only if every test carrying its marker passes
        prev = _CRITERIA.get(number, (title, True))[1]
        _CRITERIA[number] = (title, prev and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")


_SUITES = {}


@pytest.fixture(scope="session")
def suite():
    """Run each named suite once per session (oracle re-verification on)."""

    def get(name):
        if name not in _SUITES:
            _SUITES[name] = run_suite(name, SuiteConfig(cutoff=6, k0=5, oracle=True))
        return _SUITES[name]

    return get


@pytest.fixture(scope="session")
def sl2_report():
    """Symbolic structure constants of the sl2 orbifold generators."""
    from vertex_orbifold.algebras import sl2_eigenbasis
    from vertex_orbifold.genericity import orbifold_generators, structure_constants

    if "sl2-poles" in _SUITES:
        return _SUITES["sl2-poles"].data["report"]
    return structure_constants(orbifold_generators(sl2_eigenbasis()))
