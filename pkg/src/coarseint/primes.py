"""Small number-theory helpers: primality, factorization, smooth numbers.

Everything here is desk-scale (trial division); inputs are the small
primes and moduli that drive the classification experiments, not
cryptographic sizes.
"""

from __future__ import annotations

__all__ = ["is_prime", "prime_factors", "smooth_numbers", "check_prime"]


def is_prime(n: int) -> bool:
    """Trial-division primality test for n >= 0."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Return p if prime, otherwise raise ValueError."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def prime_factors(n: int) -> dict[int, int]:
    """Factor n >= 1 by trial division; returns {prime: multiplicity}."""
    if n < 1:
        raise ValueError(f"cannot factor {n}; need n >= 1")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def smooth_numbers(primes: tuple[int, ...], bound: int) -> list[int]:
    """All m in [1, bound] whose prime factors all lie in `primes`, ascending.

    1 is always included (empty product).
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    for p in primes:
        check_prime(p)
    found = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for m in frontier:
            for p in primes:
                v = m * p
                if v <= bound and v not in found:
                    found.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(found)
