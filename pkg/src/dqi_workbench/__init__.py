"""
DQI Workbench
-------------
Classical building blocks of Decoded Quantum Interferometry on Optimal
Polynomial Intersection: GF(2^b) arithmetic, register-sharing EEA machines,
Reed-Solomon syndrome decoding, combination unranking, Maiorana-McFarland
target sets and the classical attack estimators.
"""

__all__ = [
    "attacks",
    "bent",
    "cli",
    "config",
    "dicke",
    "eea_dialog",
    "eea_sync",
    "errors",
    "gf",
    "ledger",
    "paths",
    "poly",
    "rs_decode",
    "utils",
]

__version__ = "0.1.0"
