from collections import OrderedDict


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, folding its sub-tests together."""
    criteria: "OrderedDict[str, list]" = OrderedDict()
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props or rep.when != "call" and outcome != "error":
                continue
            criteria.setdefault(props["criterion"], []).append((rep.nodeid, outcome))
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(criteria, key=lambda s: int(s.split(".")[0])):
        results = criteria[name]
        ok = all(o == "passed" for _, o in results)
        failed = [n.split("::")[-1] for n, o in results if o != "passed"]
        note = f"  (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {name}{note}")
