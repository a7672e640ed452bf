"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every criterion prints a single ``[PASS]``/``[FAIL]`` line; under pytest the
lines are also collected into the terminal summary (see ``conftest.py``).
Run standalone with ``python tests/test_acceptance.py``.

Failing criteria are left failing.  The reasons are recorded in the README
("Known failures") and in the ``deviations`` block of ``fracgpe validate``.
"""

import sys

import pytest

from fracgpe.validation import CRITERIA, run_validation

LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    line = result.line()
    LINES.append(line)
    print(line)
    detail = "; ".join(f"{c.name}: {c.measured} (want {c.tolerance})"
                       for c in result.checks if not c.passed)
    assert result.passed, detail


# Criterion 7 is left out on purpose: at t = 0.25 a 1e-6 error in c_3 moves the
# series by only 1e-6 * 0.25**3 ~ 2e-8, well inside its 1e-6 oracle tolerance.
@pytest.mark.parametrize("number", [3, 4, 5, 6, 8])
def test_injected_coefficient_fault_is_caught(number):
    # a 1e-6 error in c_3 must turn every passing coefficient-based check red
    clean = CRITERIA[number]()
    faulty = CRITERIA[number](inject=True)
    for before, after in zip(clean.checks, faulty.checks):
        if before.passed and "negative control" not in before.name:
            assert not after.passed, before.name


def main() -> int:
    report = run_validation()
    for c in report["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] criterion {c['number']:2d}: {c['title']}")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
