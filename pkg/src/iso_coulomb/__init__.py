"""iso-coulomb: radial potentials isospectral to the hydrogen atom."""
