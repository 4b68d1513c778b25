"""Sign bookkeeping for wedge products of sorted basis-index tuples."""

from functools import lru_cache


@lru_cache(maxsize=65536)
def merge(I: tuple, J: tuple):
    """Return ``(sign, K)`` with ``e_I ^ e_J = sign * e_K``; ``(0, None)`` if they overlap."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    sI = set(I)
    for j in J:
        if j in sI:
            return 0, None
    # sign = (-1)^{#pairs i in I, j in J with i > j}
    inv = 0
    for j in J:
        for i in I:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(I + J))


def drop(I: tuple, r: int) -> tuple:
    return I[:r] + I[r + 1:]
