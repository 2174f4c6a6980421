# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused elementwise kernels for the split-step inner loop.

Each call replaces a chain of NumPy temporaries (density, phase, exponential,
product) with a single pass over the field.  Semantics match
feshbach_engine._kernels_py exactly; both mutate psi in place.
"""

from libc.math cimport cos, exp, sin


def apply_local_phase(double complex[::1] psi, const double[::1] potential,
                      const double[::1] density_coef, double g, double dt):
    """psi *= exp(-i dt (V + g * coef * |psi|^2)) elementwise."""
    cdef Py_ssize_t j, n = psi.shape[0]
    cdef double re, im, dens, theta, c, s
    for j in range(n):
        re = psi[j].real
        im = psi[j].imag
        dens = re * re + im * im
        theta = -dt * (potential[j] + g * density_coef[j] * dens)
        c = cos(theta)
        s = sin(theta)
        psi[j] = (re * c - im * s) + 1j * (re * s + im * c)


def apply_local_decay(double complex[::1] psi, const double[::1] potential,
                      const double[::1] density_coef, double g, double dt):
    """psi *= exp(-dt (V + g * coef * |psi|^2)), the imaginary-time factor."""
    cdef Py_ssize_t j, n = psi.shape[0]
    cdef double re, im, dens, f
    for j in range(n):
        re = psi[j].real
        im = psi[j].imag
        dens = re * re + im * im
        f = exp(-dt * (potential[j] + g * density_coef[j] * dens))
        psi[j] = (re * f) + 1j * (im * f)
