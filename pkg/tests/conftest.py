import itertools
import random

import pytest

from twisted_spectra import fintop, zline


def fixpoint_closure(n, family):
    """Brute-force topology generation: close under pairwise union and intersection until stable."""
    opens = {0, (1 << n) - 1} | set(family)
    while True:
        new = {a | b for a in opens for b in opens} | {a & b for a in opens for b in opens}
        if new <= opens:
            return frozenset(opens)
        opens |= new


def algebra_closure(n, family):
    """Brute-force Boolean algebra: close under complement and union until stable."""
    full = (1 << n) - 1
    alg = {0, full} | set(family)
    while True:
        new = {full & ~a for a in alg} | {a | b for a in alg for b in alg}
        if new <= alg:
            return frozenset(alg)
        alg |= new


def is_infinite(s: zline.PeriodicSet) -> bool:
    """Membership-only test: a periodic set is infinite iff it has members past all its exceptions."""
    edge = max((abs(k) for k in s.added | s.removed), default=0) + 1
    return any(k in s for k in range(edge, edge + 2 * s.m + 1))


def random_periodic(rng: random.Random, max_m=6, spread=15) -> zline.PeriodicSet:
    m = rng.randint(1, max_m)
    res = [r for r in range(m) if rng.random() < 0.5]
    added = rng.sample(range(-spread, spread + 1), rng.randint(0, 3))
    removed = rng.sample(range(-spread, spread + 1), rng.randint(0, 3))
    return zline.PeriodicSet(m, frozenset(res), frozenset(added), frozenset(removed))


TOPS = {n: fintop.enumerate_topologies(n) for n in range(4)}


def random_model(rng: random.Random, max_z=3) -> zline.TwistedZ:
    z = rng.choice(TOPS[rng.randint(1, max_z)])
    m = rng.randint(1, 6)
    values = tuple(rng.randrange(z.n) for _ in range(m))
    exc = {rng.randint(-20, 20): rng.randrange(z.n) for _ in range(rng.randint(0, 3))}
    return zline.TwistedZ(z, zline.PeriodicMap(z, values, exc))


@pytest.fixture
def rng():
    return random.Random(20141018)


def all_instances(max_y=3, max_z=3, min_size=0):
    for ny in range(min_size, max_y + 1):
        for nz in range(min_size, max_z + 1):
            for y, z in itertools.product(TOPS[ny], TOPS[nz]):
                for f in fintop.continuous_maps(y, z):
                    yield y, z, f


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
