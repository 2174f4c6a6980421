"""NumPy implementations of the split-step kernels.

Reference semantics for the compiled extension and the fallback used when it
is not built.  Both variants mutate psi in place.
"""

import numpy as np


def apply_local_phase(psi, potential, density_coef, g, dt):
    """psi *= exp(-i dt (V + g * coef * |psi|^2)) elementwise."""
    dens = psi.real ** 2 + psi.imag ** 2
    psi *= np.exp(-1j * dt * (potential + g * density_coef * dens))


def apply_local_decay(psi, potential, density_coef, g, dt):
    """psi *= exp(-dt (V + g * coef * |psi|^2)), the imaginary-time factor."""
    dens = psi.real ** 2 + psi.imag ** 2
    psi *= np.exp(-dt * (potential + g * density_coef * dens))
