# Nonlocal boundary value problem: Green's function, inequality, spectral solver
