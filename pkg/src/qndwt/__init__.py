"""Simulated quantum non-decimated wavelet transform.

Classical periodic wavelet transforms (:mod:`qndwt.wavelets`), a small
statevector / density-matrix simulator (:mod:`qndwt.sim`), the shift-register
QNDWT construction (:mod:`qndwt.engine`), Hadamard-test energy probes
(:mod:`qndwt.hadamard`), wavelet-domain shrinkage channels
(:mod:`qndwt.shrinkage`) and test signals (:mod:`qndwt.signals`).
"""
from .engine import *  # noqa: F401,F403
from .engine import __all__ as _engine_all
from .hadamard import *  # noqa: F401,F403
from .hadamard import __all__ as _hadamard_all
from .shrinkage import *  # noqa: F401,F403
from .shrinkage import __all__ as _shrinkage_all
from .signals import *  # noqa: F401,F403
from .signals import __all__ as _signals_all
from .sim import *  # noqa: F401,F403
from .sim import __all__ as _sim_all
from .wavelets import *  # noqa: F401,F403
from .wavelets import __all__ as _wavelets_all

__version__ = "0.1.0"

__all__ = [*_wavelets_all, *_sim_all, *_engine_all, *_hadamard_all, *_shrinkage_all, *_signals_all]
