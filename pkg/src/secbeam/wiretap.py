"""MDS coset coding over a prime field.

The message is the syndrome of the transmitted word with respect to a
Reed-Solomon parity-check matrix, and the transmitted word is a uniformly
random member of that coset. Any N - K observed symbols of an [N, N - K] MDS
code are then independent of the message.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (FieldTooSmall, IncompleteReception, InvalidInput, InvalidParameters,
                     OracleInfeasible)

ORACLE_BUDGET = 10 ** 7
ERASED = None


def is_prime(q):
    if q < 2 or int(q) != q:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def smallest_prime_at_least(n):
    q = max(2, n)
    while not is_prime(q):
        q += 1
    return q


def inv_mod(a, q):
    a = int(a) % q
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, q - 2, q)


def solve_mod(A, b, q):
    """Solve A x = b over GF(q) for square invertible A by Gauss-Jordan elimination."""
    A = np.array(A, dtype=np.int64) % q
    b = np.array(b, dtype=np.int64) % q
    n = A.shape[0]
    M = np.concatenate([A, b.reshape(n, -1)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r, col]), None)
        if piv is None:
            raise InvalidInput("matrix is singular over GF(q)")
        M[[col, piv]] = M[[piv, col]]
        M[col] = M[col] * inv_mod(M[col, col], q) % q
        for r in range(n):
            if r != col and M[r, col]:
                M[r] = (M[r] - M[r, col] * M[col]) % q
    out = M[:, n:]
    return out.ravel() if b.ndim == 1 else out


def det_mod(A, q):
    A = np.array(A, dtype=np.int64) % q
    n = A.shape[0]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r, col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            det = -det
        det = det * int(A[col, col]) % q
        inv = inv_mod(A[col, col], q)
        for r in range(col + 1, n):
            if A[r, col]:
                A[r] = (A[r] - A[r, col] * inv * A[col]) % q
    return det % q


@dataclass(frozen=True)
class CosetCode:
    """[N, N-K] code over GF(q) given by its K x N parity-check matrix."""

    N: int
    K: int
    q: int
    points: tuple
    parity_check: np.ndarray

    @property
    def pivots(self):
        # the last K coordinates are solved for during encoding
        return np.arange(self.N - self.K, self.N)

    def syndrome(self, x):
        return np.asarray(x, dtype=np.int64) @ self.parity_check.T % self.q

    def is_mds(self):
        """Every choice of K columns of the parity-check matrix is invertible."""
        cols = range(self.N)
        return all(det_mod(self.parity_check[:, list(c)], self.q)
                   for c in itertools.combinations(cols, self.K))

    def to_dict(self):
        return {"N": self.N, "K": self.K, "q": self.q, "evaluation_points": list(self.points)}


def build_code(N, K, q=None):
    """Reed-Solomon parity-check code with rows alpha_j^i, i < K, on points 1..N."""
    if K < 1 or N < 1 or K > N:
        raise InvalidParameters(f"need 1 <= K <= N, got N={N}, K={K}")
    if q is None:
        q = smallest_prime_at_least(N + 1)
    if not is_prime(q):
        raise InvalidParameters(f"q={q} is not prime")
    if N > q - 1:
        raise FieldTooSmall(f"N={N} needs q >= N + 1, got q={q}")
    points = tuple(range(1, N + 1))
    H = np.array([[pow(a, i, q) for a in points] for i in range(K)], dtype=np.int64)
    H.setflags(write=False)
    return CosetCode(N, K, q, points, H)


def _check_symbols(v, q, length, what):
    v = np.asarray(v, dtype=np.int64).ravel()
    if v.size != length:
        raise InvalidInput(f"{what} must have length {length}")
    if np.any((v < 0) | (v >= q)):
        raise InvalidInput(f"{what} has symbols outside GF({q})")
    return v


def encode(code, message, rng):
    """Uniformly random member of the coset {x : H x = message}."""
    s = _check_symbols(message, code.q, code.K, "message")
    free = np.arange(code.N - code.K)
    x = np.zeros(code.N, dtype=np.int64)
    x[free] = rng.integers(0, code.q, size=free.size)
    H = code.parity_check
    rhs = (s - H[:, free] @ x[free]) % code.q
    x[code.pivots] = solve_mod(H[:, code.pivots], rhs, code.q)
    return x


def decode(code, x):
    """Syndrome of a fully received word; erasures raise IncompleteReception."""
    x = list(x)
    if len(x) != code.N:
        raise InvalidInput(f"received word must have length {code.N}")
    if any(v is ERASED for v in x):
        raise IncompleteReception("received word contains erasures")
    return code.syndrome(_check_symbols(x, code.q, code.N, "received word"))


@dataclass(frozen=True)
class ObservationSequence:
    values: tuple
    observed: frozenset


def make_observation(x, observed):
    """Keep symbols at the 1-based time steps in ``observed``, erase the rest."""
    x = list(x)
    obs = frozenset(int(t) for t in observed)
    if any(not 1 <= t <= len(x) for t in obs):
        raise InvalidInput(f"observation indices must lie in 1..{len(x)}")
    return ObservationSequence(tuple(x[t - 1] if t in obs else ERASED for t in range(1, len(x) + 1)), obs)


def _all_words(code):
    total = code.q ** code.N
    if total > ORACLE_BUDGET:
        raise OracleInfeasible(f"q^N = {total} exceeds the budget {ORACLE_BUDGET}")
    idx = np.arange(total, dtype=np.int64)
    digits = (idx[:, None] // code.q ** np.arange(code.N, dtype=np.int64)) % code.q
    msg = code.syndrome(digits) @ (code.q ** np.arange(code.K, dtype=np.int64))
    return digits, msg


def joint_counts(code, observed, _words=None):
    """Table of (observed pattern, message) counts over all q^N words.

    Row r counts, for one assignment of the observed symbols, how many words
    carry each message; with a uniform message and uniform coset member every
    word is equally likely, so normalized rows are posteriors.
    """
    digits, msg = _words if _words is not None else _all_words(code)
    obs = sorted(int(t) - 1 for t in observed)
    key = digits[:, obs] @ (code.q ** np.arange(len(obs), dtype=np.int64)) if obs else np.zeros(len(msg), np.int64)
    nmsg = code.q ** code.K
    counts = np.bincount(key * nmsg + msg, minlength=code.q ** len(obs) * nmsg)
    return counts.reshape(code.q ** len(obs), nmsg)


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum())


def conditional_entropy(code, observed, _words=None):
    """H(message | observed symbols) in bits."""
    table = joint_counts(code, observed, _words)
    return _entropy(table.ravel()) - _entropy(table.sum(axis=1))


def equivocation(code, mu):
    """Minimum over all observation sets of size ``mu`` of H(message | observation), in bits."""
    if not 0 <= mu <= code.N:
        raise InvalidInput(f"mu must lie in 0..{code.N}")
    words = _all_words(code)
    return min(conditional_entropy(code, obs, words)
               for obs in itertools.combinations(range(1, code.N + 1), mu))
