"""Independent brute-force evaluators used by the unit and acceptance tests.

Everything here is written against the documented definitions, not the
library code: positional index sets are built by scanning membership
predicates, and the random sample is re-derived from the documented
SplitMix64 + partial Fisher-Yates procedure with a from-scratch
implementation.
"""

from fractions import Fraction

_M64 = (1 << 64) - 1


def oracle_indices(n, tau, strategy, min_keep=True):
    """Literal evaluation of the positional set definitions.

    Returns (ascending 1-based members, fallback flag). Ratios are exact
    fractions of the decimal written.
    """
    tau = Fraction(tau)
    if tau == 1:
        return list(range(1, n + 1)), False
    if strategy == "epic":
        half = int(tau * n / 2)  # Fraction floor via int() for >= 0
        members = [i for i in range(1, n + 1) if i <= half or i >= n - half + 1]
        if members:
            return members, False
        assert min_keep
        return ([1] if n == 1 else [1, n]), True
    if strategy == "hoc":
        keep = int(tau * n)
        members = [i for i in range(1, n + 1) if i <= keep]
        return (members, False) if members else ([1], True)
    if strategy == "toc":
        keep = int(tau * n)
        members = [i for i in range(1, n + 1) if i >= n - keep + 1]
        return (members, False) if members else ([n], True)
    if strategy == "moc":
        margin = int((1 - tau) * n / 2)
        members = [i for i in range(1, n + 1) if margin + 1 <= i <= n - margin]
        assert members
        return members, False
    raise AssertionError(strategy)


def _mix(z):
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


def oracle_random_indices(n, tau, seed):
    """From-scratch replay of the documented random-sampling procedure."""
    size = max(1, int(Fraction(tau) * n))
    state = seed & _M64

    def next_u64():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & _M64
        return _mix(state)

    def below(bound):
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            word = next_u64()
            if word < limit:
                return word % bound

    arr = list(range(1, n + 1))
    for i in range(size):
        j = i + below(n - i)
        arr[i], arr[j] = arr[j], arr[i]
    return sorted(arr[:size])
