"""The twelve acceptance criteria, each run at both primes, one pass/fail line per criterion."""

import pytest

from quivcover.reproduce import CRITERIA, PRIMES, run_all


@pytest.fixture(scope="session")
def outcomes():
    return run_all(PRIMES)


def criterion_line(outcomes, number: int) -> tuple[bool, str]:
    rows = [o for o in outcomes if o.number == number]
    ok = bool(rows) and all(o.ok for o in rows)
    title = dict((n, t) for n, t, *_ in CRITERIA).get(number, "identical results at both primes")
    secs = sum(o.seconds for o in rows)
    notes = "; ".join(o.message for o in rows if o.message)
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({secs:.2f}s)"
    return ok, line + (f" -- {notes}" if notes else "")


@pytest.mark.parametrize("number", range(1, 13))
def test_criterion(outcomes, number, capsys):
    ok, line = criterion_line(outcomes, number)
    with capsys.disabled():
        print("\n" + line)
    details = [(o.title, o.summary) for o in outcomes if o.number == number]
    assert ok, f"{line}\n{details}"


if __name__ == "__main__":
    res = run_all(PRIMES)
    for k in range(1, 13):
        print(criterion_line(res, k)[1])
