"""Selects the scoring kernel backend at import time.

The compiled extension is preferred; set UAPR_NO_EXT=1 to force the
pure-numpy fallback (useful for the backend-comparison benchmark and for
debugging).
"""

import os

from . import _kernels_ref

if os.environ.get("UAPR_NO_EXT"):
    _impl = _kernels_ref
    BACKEND = "python"
else:
    try:
        from . import _kernels_fast as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_ref
        BACKEND = "python"

cosine_scores = _impl.cosine_scores
mls_scores = _impl.mls_scores
member_score_stats = _impl.member_score_stats
