"""Central table of numerical tolerances.

Every threshold used by the package lives here. The active table is held in a
context variable, so an override made with :func:`override` only affects the
current thread/task and is undone on exit.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class Tolerances:
    # linear algebra
    hermitian_input: float = 1e-9
    jacobi_offdiag: float = 1e-14
    jacobi_max_sweeps: int = 100
    # states
    state: float = 1e-10
    amplitude: float = 1e-12
    purity: float = 1e-8
    # unitaries
    unitary_input: float = 1e-9
    unit_modulus: float = 1e-10
    # measures
    eig_clip: float = 1e-10
    negativity_floor: float = 1e-10
    # complementarity
    arithmetic: float = 1e-9
    saturation: float = 1e-6

    def replace(self, **changes) -> "Tolerances":
        unknown = set(changes) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **changes)


DEFAULT = Tolerances()

_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar("gravres_tolerances", default=DEFAULT)


def get() -> Tolerances:
    """Return the tolerance table in effect for the caller."""
    return _active.get()


def set_active(tol: Tolerances) -> None:
    _active.set(tol)


@contextlib.contextmanager
def override(**changes) -> Iterator[Tolerances]:
    """Temporarily replace some tolerances::

        with tolerances.override(arithmetic=1e-12):
            ...
    """
    token = _active.set(_active.get().replace(**changes))
    try:
        yield _active.get()
    finally:
        _active.reset(token)
