import pytest

from tamekpi1.certify import certify
from tamekpi1.fields import FieldDescriptor
from tamekpi1.search import SearchDomain


def brute_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def brute_dlog(x, g, q):
    acc = 1
    for t in range(q - 1):
        if acc == x % q:
            return t
        acc = acc * g % q
    raise ValueError("not in the group")


def brute_is_pth_power(x, q, p):
    return any(pow(y, p, q) == x % q for y in range(1, q))


@pytest.fixture(scope="session")
def cert_7_13():
    return certify(FieldDescriptor.rationals(), 3, [7, 13], SearchDomain(3, 10**6))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
