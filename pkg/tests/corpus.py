"""Cached corpus groups and their Dixon tables."""

from functools import lru_cache

from prodmix.chartable import dixon_char_table
from prodmix.io import load_group


@lru_cache(maxsize=None)
def group(name):
    return load_group(name)


@lru_cache(maxsize=None)
def table(name):
    return dixon_char_table(group(name))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list[str] = []


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" | {detail}" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok
