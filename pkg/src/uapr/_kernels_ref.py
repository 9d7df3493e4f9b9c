"""Pure-numpy scoring kernels (fallback when the compiled extension is absent).

All kernels take and return float64 arrays.  The compiled twin in
_kernels_fast.pyx implements the same contracts.
"""

from __future__ import annotations

import numpy as np

from .errors import ZeroVector

LOG_2PI = float(np.log(2.0 * np.pi))


def cosine_scores(query: np.ndarray, database: np.ndarray) -> np.ndarray:
    """Cosine similarity of one query (L,) against a database (K, L)."""
    query = np.ascontiguousarray(query, dtype=np.float64)
    database = np.ascontiguousarray(database, dtype=np.float64)
    qn = np.linalg.norm(query)
    if qn == 0.0:
        raise ZeroVector("query descriptor has zero norm")
    dn = np.linalg.norm(database, axis=1)
    if np.any(dn == 0.0):
        raise ZeroVector("database descriptor has zero norm")
    return (database @ query) / (dn * qn)


def mls_scores(
    q_mean: np.ndarray,
    q_var: np.ndarray,
    db_mean: np.ndarray,
    db_var: np.ndarray,
    literal: bool = False,
) -> np.ndarray:
    """Gaussian-embedding log-likelihood of the query matching each entry.

    literal=True uses the sum-of-means numerator instead of the difference.
    """
    q_mean = np.asarray(q_mean, dtype=np.float64)
    q_var = np.asarray(q_var, dtype=np.float64)
    db_mean = np.asarray(db_mean, dtype=np.float64)
    db_var = np.asarray(db_var, dtype=np.float64)
    sv = db_var + q_var            # (K, L)
    if literal:
        num = (db_mean + q_mean) ** 2
    else:
        num = (db_mean - q_mean) ** 2
    L = q_mean.size
    return -0.5 * np.sum(num / sv + np.log(sv), axis=1) - 0.5 * L * LOG_2PI


def member_score_stats(
    q_members: np.ndarray, db_members: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry mean and population variance of per-member cosine scores.

    q_members: (M, L); db_members: (M, K, L).  Member m of the query is
    compared against member m of every entry, giving M scores per entry.
    """
    M = q_members.shape[0]
    scores = np.stack(
        [cosine_scores(q_members[m], db_members[m]) for m in range(M)]
    )                              # (M, K)
    mean = np.mean(scores, axis=0)
    var = np.mean((scores - mean) ** 2, axis=0)
    return mean, var
