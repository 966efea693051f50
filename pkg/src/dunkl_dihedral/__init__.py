"""Vector-valued polynomials for the dihedral groups with Dunkl operators."""
