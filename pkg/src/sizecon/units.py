"""Physical constants and unit conversions.

All internal energies are in hartree; kcal/mol appears only at reporting
boundaries.
"""

# Conversion fixed for the whole artifact; reported slopes and horizons
# depend on this exact value.
HARTREE_TO_KCAL_PER_MOL = 627.509474

# CODATA 2018: 1 bohr = 0.529177210903 angstrom.
BOHR_PER_ANGSTROM = 1.0 / 0.529177210903

# Chemical accuracy threshold used for the size-consistency horizon.
CHEMICAL_ACCURACY_KCAL = 1.0
