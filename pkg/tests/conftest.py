from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from coverreps.free_group import FreeAutomorphism, Word, compose, reduce  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def nielsen(rank: int, kind: str, i: int, j: int) -> FreeAutomorphism:
    """Elementary automorphism with its inverse declared."""
    imgs = [Word.generator(k) for k in range(1, rank + 1)]
    inv = list(imgs)
    xi, xj = Word.generator(i), Word.generator(j)
    if kind == "right":  # x_i -> x_i x_j
        imgs[i - 1], inv[i - 1] = xi * xj, xi * xj.inverse()
    elif kind == "left":  # x_i -> x_j x_i
        imgs[i - 1], inv[i - 1] = xj * xi, xj.inverse() * xi
    elif kind == "invert":
        imgs[i - 1] = inv[i - 1] = xi.inverse()
    elif kind == "swap":
        imgs[i - 1], imgs[j - 1] = xj, xi
        inv = list(imgs)
    return FreeAutomorphism(rank, tuple(imgs), tuple(inv))


@st.composite
def words(draw, rank: int | None = None, max_len: int = 16):
    n = rank if rank is not None else draw(st.integers(1, 5))
    raw = draw(st.lists(st.integers(1, n).flatmap(lambda i: st.sampled_from([i, -i])), max_size=max_len))
    return reduce(raw)


@st.composite
def automorphisms(draw, rank: int | None = None, max_moves: int = 5):
    n = rank if rank is not None else draw(st.integers(2, 4))
    f = FreeAutomorphism.identity(n)
    for _ in range(draw(st.integers(0, max_moves))):
        kind = draw(st.sampled_from(["right", "left", "invert", "swap"]))
        i = draw(st.integers(1, n))
        j = draw(st.integers(1, n).filter(lambda x: x != i))
        f = compose(f, nielsen(n, kind, i, j))
    return f


@pytest.fixture
def twist():
    return FreeAutomorphism.from_strings(["xy", "y"], ["xY", "y"])


@pytest.fixture
def fib():
    return FreeAutomorphism.from_strings(["xy", "x"])


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
