"""Two-dimensional electronic spectra of a driven Lambda-type three-level atom."""
