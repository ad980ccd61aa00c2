"""Console-script launcher.

Kept free of numpy/scipy imports so that a ``--threads`` request (flag or
``PSLR_THREADS``) can export the standard BLAS thread-count variables before
the BLAS runtime is loaded; once numpy is imported the pool size is fixed.
"""

import os
import sys

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")


def _peek_threads(args) -> int:
    value = os.environ.get("PSLR_THREADS")
    for i, tok in enumerate(args):
        if tok == "--threads" and i + 1 < len(args):
            value = args[i + 1]
        elif tok.startswith("--threads="):
            value = tok.split("=", 1)[1]
    try:
        return int(value) if value is not None else 0
    except ValueError:
        return 0


def main(argv=None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    threads = _peek_threads(args)
    if threads > 0:
        for var in _THREAD_VARS:
            os.environ[var] = str(threads)
    from .cli import main as run
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
