"""Hot loops, compiled when possible.

``simulate_trials`` and ``outcome_code`` come from the Cython extension if it
was built, otherwise from the pure-Python mirror.  Both produce identical
numbers for identical arguments.
"""

from . import _mc_py as python_impl

try:
    from . import _mc as compiled_impl
except ImportError:  # extension not built
    compiled_impl = None

_impl = compiled_impl if compiled_impl is not None else python_impl
BACKEND = "cython" if compiled_impl is not None else "python"

simulate_trials = _impl.simulate_trials
outcome_code = _impl.outcome_code


def get_backend(name: str | None = None):
    """Kernel module for ``name`` ("cython", "python" or None for the default)."""
    if name is None:
        return _impl
    if name == "python":
        return python_impl
    if name == "cython":
        if compiled_impl is None:
            raise ImportError("the compiled Monte Carlo kernel is not available")
        return compiled_impl
    raise ValueError(f"unknown backend {name!r}")
