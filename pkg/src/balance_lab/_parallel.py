import os


def thread_count() -> int:
    """Worker cap from ``BALANCE_LAB_THREADS`` (default 1)."""
    try:
        n = int(os.environ.get("BALANCE_LAB_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)
