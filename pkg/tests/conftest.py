from __future__ import annotations

import pytest

from catalysis.supercat import SupercatalysisCertificate

CRITERIA = {
    1: "worked-example tensor products and majorization",
    2: "incomparability of the example pairs",
    3: "catalysis checks for the example pairs",
    4: "OPMP endpoints of the 4x4 pair at k=2",
    5: "supercatalysis certificates",
    6: "bound attainment on the two OPMPs",
    7: "no-go pair with equal largest coefficients",
    8: "property suite against brute-force oracles",
    9: "final auxiliary state is never maximally entangled",
    10: "entropy numerics against an independent evaluation",
}

_outcomes: dict[int, list[str]] = {}

# every certificate built during the session, for the final-state check
CERTIFICATES: list[SupercatalysisCertificate] = []
_init = SupercatalysisCertificate.__init__


def _recording_init(self, *args, **kwargs):
    _init(self, *args, **kwargs)
    CERTIFICATES.append(self)


SupercatalysisCertificate.__init__ = _recording_init


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test belongs to")
    config.addinivalue_line("markers", "session_wide: inspects state gathered by the whole run; ordered last")


def pytest_collection_modifyitems(items):
    # session-wide checks run last so they see everything the other tests built
    items.sort(key=lambda item: item.get_closest_marker("session_wide") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "xfail"
        else:
            status = rep.outcome
        _outcomes.setdefault(n, []).append(status)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if not results:
            continue
        ok = all(r == "passed" for r in results)
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]}"
        if not ok:
            line += f"  ({results.count('passed')}/{len(results)} checks pass)"
        terminalreporter.write_line(line)
