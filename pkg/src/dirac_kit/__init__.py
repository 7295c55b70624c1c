"""dirac-kit: exact linear Dirac-structure calculus and a surface Poisson classifier.

Layers:

* exact_linalg - rational matrices and canonical subspaces.
* dirac - linear Dirac structures, canonical relations, gauge action,
  dual pairs and their reduction.
* groupoid - pair-groupoid multiplicativity and bimodule checks.
* expr - the (z, theta) expression language.
* surface - zero curves, modular periods, regularized volume, region
  trees and gauge operations on S^2/T^2.
* trees - weighted signed tree isomorphism and the sphere Morita
  decision.
* cli - the `dirac-kit` command.
"""

__version__ = "0.1.0"
