"""Multivariate juggling Markov chains with exact stationary laws."""
