"""Shared store for the one-line acceptance verdicts."""

RESULTS: dict = {}


def record(num: int, name: str, passed: bool, detail: str) -> str:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {name} -- {detail}"
    RESULTS[num] = line
    print(line)
    return line
