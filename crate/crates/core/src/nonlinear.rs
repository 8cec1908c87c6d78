//! Porous-medium and fast-diffusion solvers and gradient-bound checks.
