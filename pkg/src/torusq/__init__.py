"""torusq: quantized symplectic torus maps and their arithmetic symmetries.

Library layout:

- ffield / gfpoly / intpoly / exactla: exact arithmetic (finite fields,
  polynomial factorization, rational linear algebra).
- rational: the classical map (orbit decomposition, AQUE criterion,
  quadratic form Q, sharp coefficients, scar manifolds).
- quantizer: elementary operators, Weyl quantization, propagators.
- hecke: prime-level centralizer, Hecke operators, joint eigenbases.
- expsums: exponential sums E_q(nu, chi), matrix-element formulas,
  Weil/Kloosterman bounds, Sato-Tate statistics.
- scars: super-scar eigenfunctions on invariant isotropic manifolds.
- statslab: variance / moment / distribution experiments.
- cli: command-line front end over the fixtures.
"""

__version__ = "0.1.0"
