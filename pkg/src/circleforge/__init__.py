"""circleforge: exact and high-precision machinery around the Rademacher-type
formula for lower 1-run overpartitions.

Subpackages:
    qseries     exact truncated q-series, named series, enumeration oracle
    modular     Kronecker symbol, strengthened inverses, eta multiplier, Farey arcs
    kloosterman classical / modified / incomplete Kloosterman sums, dual paths
    hpnum       arbitrary-precision Bessel functions and certified quadrature
    integrals   Mordell integrals, principal-part truncations, residue contour
    rademacher  assembled exact formulas and verification harness
    transform   numerical checks of the modular transformation laws
    cli         command-line front end
"""

__version__ = "0.1.0"
