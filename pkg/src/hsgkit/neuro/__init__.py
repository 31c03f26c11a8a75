"""Delayed threshold neurons on point sets, simplicial shapes and the
multi-fiber world simulation."""
